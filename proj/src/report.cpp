#include "report.hpp"

#include <cstdio>

#include <json.hpp>

#include "sha256.hpp"

namespace cashflow {

std::string params_hash(const Params& params) {
  nlohmann::json j = params;
  return sha256_hex(j.dump()).substr(0, 12);
}

std::string results_csv(const std::vector<AblationResult>& results) {
  std::string out = "model,feature_set,fold,auroc,seed,params_hash\n";
  char line[256];
  for (const auto& r : results) {
    const std::string hash = params_hash(r.params);
    for (std::size_t fold = 0; fold < r.auroc_per_fold.size(); ++fold) {
      std::snprintf(line, sizeof(line), "%s,%s,%zu,%.12f,%llu,%s\n",
                    std::string(model_kind_name(r.model_kind)).c_str(),
                    std::string(feature_set_name(r.feature_set)).c_str(), fold,
                    r.auroc_per_fold[fold], static_cast<unsigned long long>(r.seed), hash.c_str());
      out += line;
    }
    std::snprintf(line, sizeof(line), "%s,%s,mean,%.12f,%llu,%s\n",
                  std::string(model_kind_name(r.model_kind)).c_str(),
                  std::string(feature_set_name(r.feature_set)).c_str(), r.auroc_mean,
                  static_cast<unsigned long long>(r.seed), hash.c_str());
    out += line;
  }
  return out;
}

std::string iv_csv(const std::vector<IvReportRow>& rows) {
  std::string out = "feature,iv,iv_class,rank\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%.12f,%s,%d\n", r.feature.c_str(), r.iv,
                  std::string(iv_class_name(r.iv_class)).c_str(), r.rank);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMargin = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double plot_x(double fpr) { return kMargin + fpr * (kWidth - 2 * kMargin); }
double plot_y(double tpr) { return kHeight - kMargin - tpr * (kHeight - 2 * kMargin); }

}  // namespace

std::string svg_roc_curves(const std::vector<std::pair<std::string, RocCurve>>& curves) {
  std::string svg;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                kWidth, kHeight, kWidth, kHeight);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and the chance diagonal.
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", kMargin,
                kHeight - kMargin, kWidth - kMargin, kHeight - kMargin);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", kMargin,
                kMargin, kMargin, kHeight - kMargin);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#bbbbbb\" "
                "stroke-dasharray=\"6,4\"/>\n",
                plot_x(0.0), plot_y(0.0), plot_x(1.0), plot_y(1.0));
  svg += buf;
  svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"" + std::to_string(kHeight - 16) +
         "\" font-size=\"14\" text-anchor=\"middle\">False positive rate</text>\n";
  svg += "<text x=\"18\" y=\"" + std::to_string(kHeight / 2) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         std::to_string(kHeight / 2) + ")\">True positive rate</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& [label, curve] = curves[c];
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", plot_x(curve.fpr[i]), plot_y(curve.tpr[i]));
      points += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%zu\" font-size=\"13\" fill=\"%s\">%s (AUROC %s)</text>\n",
                  kWidth - kMargin - 190, kMargin + 18 * (c + 1), color, label.c_str(),
                  fmt(curve.auroc).c_str());
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

std::string svg_iv_bars(const std::vector<IvReportRow>& rows) {
  const int bar_h = 18;
  const int height = 2 * kMargin + bar_h * static_cast<int>(rows.size());
  double max_iv = 0.0;
  for (const auto& r : rows) max_iv = std::max(max_iv, r.iv);
  if (max_iv <= 0.0) max_iv = 1.0;

  std::string svg;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                kWidth, height, kWidth, height);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(kWidth / 2) +
         "\" y=\"28\" font-size=\"15\" text-anchor=\"middle\">Information value by feature</text>\n";

  const int label_w = 230;
  const double scale = (kWidth - label_w - kMargin) / max_iv;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int y = kMargin + bar_h * static_cast<int>(i);
    const double w = rows[i].iv > 0.0 ? rows[i].iv * scale : 0.0;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                  label_w - 6, y + bar_h - 6, rows[i].feature.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"%.2f\" height=\"%d\" fill=\"#1f77b4\"/>\n",
                  label_w, y + 2, w, bar_h - 6);
    svg += buf;
    std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%d\" font-size=\"10\">%.4f</text>\n",
                  label_w + w + 4, y + bar_h - 6, rows[i].iv);
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace cashflow

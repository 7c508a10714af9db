#include "application.hpp"

#include "errors.hpp"

namespace cashflow {

void check_form(const ApplicationForm& form) {
  if (form.years_in_business < 0.0)
    raise(Errc::invalid_config, "years_in_business must be non-negative");
  if (form.num_directors < 1) raise(Errc::invalid_config, "num_directors must be >= 1");
  if (form.director_min_age < 18) raise(Errc::invalid_config, "director_min_age must be >= 18");
  if (form.monthly_installment_minor <= 0)
    raise(Errc::invalid_config, "monthly_installment_minor must be positive");
}

}  // namespace cashflow

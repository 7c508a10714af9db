#pragma once

#include <string>

#include "money.hpp"

namespace cashflow {

// Loan-application form attributes as submitted by the applicant. Arrives
// with the statements at ingestion time and feeds the application-side
// features.
struct ApplicationForm {
  double years_in_business = 0.0;
  std::string location;                    // categorical code
  std::string sector_code;                 // categorical code
  int num_directors = 1;                   // >= 1
  int director_min_age = 18;               // >= 18
  std::string customer_classification;     // categorical code
  MinorUnits monthly_installment_minor = 1;  // > 0
};

// Throws INVALID_CONFIG when a form violates its field invariants.
void check_form(const ApplicationForm& form);

}  // namespace cashflow

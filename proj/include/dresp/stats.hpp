#pragma once

namespace dresp {

// Standard normal density, CDF and quantile. The quantile uses Wichura's
// AS241 rational approximations (double precision over the full open
// interval), so inverse-CDF sampling stays exact enough for the
// statistical checks in the test suite.
double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);  // p must lie in (0, 1)

}  // namespace dresp

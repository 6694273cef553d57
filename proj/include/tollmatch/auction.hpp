#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tollmatch {

// Two-driver auction baseline. Values of time theta_1, theta_2 split the
// plane into three cases; the boundaries theta1 = theta2/2 and theta1 =
// 2*theta2 belong to the shared (middle) case, and the case predicate is
// exact in floating point because both bounds are power-of-two multiples.
enum class AuctionCase { both_travel, first_only, second_only };

inline std::string to_string(AuctionCase c) {
  switch (c) {
    case AuctionCase::both_travel: return "both_travel";
    case AuctionCase::first_only: return "first_only";
    case AuctionCase::second_only: return "second_only";
  }
  return "?";
}

struct AuctionScenario {
  double free_time = 4.0;              // S: trip time without traffic (same value as t_f)
  std::vector<double> congested_time;  // c(k) table, c(k) = congested_time[k-1]; empty -> c(k) = k
  double phi = 0.5;                    // matching payment fraction, in (0, 1)

  double c(int k) const {
    if (k < 1) throw std::invalid_argument("auction: traveler count must be >= 1");
    if (k <= static_cast<int>(congested_time.size())) return congested_time[k - 1];
    return static_cast<double>(k);
  }

  void validate() const {
    if (!(phi > 0 && phi < 1)) throw std::invalid_argument("auction: phi must be in (0, 1)");
    for (std::size_t i = 1; i < congested_time.size(); ++i)
      if (congested_time[i] < congested_time[i - 1])
        throw std::invalid_argument("auction: c(k) must be nondecreasing");
  }
};

inline void check_thetas(double theta1, double theta2) {
  if (!(theta1 > 0) || !(theta2 > 0))
    throw std::invalid_argument("auction: values of time must be > 0");
}

inline AuctionCase auc_case(double theta1, double theta2) {
  check_thetas(theta1, theta2);
  if (theta1 > 2.0 * theta2) return AuctionCase::first_only;
  if (theta1 < 0.5 * theta2) return AuctionCase::second_only;
  return AuctionCase::both_travel;
}

// Allocation rule: (1,1) in the shared case, (1,0) when driver 1 far
// outvalues driver 2, (0,1) in the mirror case.
inline std::pair<int, int> auc_allocate(double theta1, double theta2) {
  switch (auc_case(theta1, theta2)) {
    case AuctionCase::both_travel: return {1, 1};
    case AuctionCase::first_only: return {1, 0};
    case AuctionCase::second_only: return {0, 1};
  }
  throw std::logic_error("auc_allocate: unreachable");
}

// Driver 1's payment: 0 / theta2 / 3*theta2 by case.
inline double auc_payment(double theta1, double theta2) {
  switch (auc_case(theta1, theta2)) {
    case AuctionCase::both_travel: return theta2;
    case AuctionCase::first_only: return 3.0 * theta2;
    case AuctionCase::second_only: return 0.0;
  }
  throw std::logic_error("auc_payment: unreachable");
}

// Driver 1's travel time: 2 shared, 1 solo, nullopt when driver 1 stays home.
inline std::optional<double> auc_travel_time(double theta1, double theta2) {
  switch (auc_case(theta1, theta2)) {
    case AuctionCase::both_travel: return 2.0;
    case AuctionCase::first_only: return 1.0;
    case AuctionCase::second_only: return std::nullopt;
  }
  throw std::logic_error("auc_travel_time: unreachable");
}

constexpr double kOptOutUtility = 0.0;

// u^T = v(theta, k) - p with v(theta, k) = theta * (S - c(k)).
inline double auc_utility(double theta, int travelers, double payment,
                          const AuctionScenario& s) {
  if (!(theta > 0)) throw std::invalid_argument("auction: value of time must be > 0");
  return theta * (s.free_time - s.c(travelers)) - payment;
}

// Both sides of the head-to-head utility comparison, computed literally with
// t_f = 4: U_auc = theta_d * (4 - t_c) and U_mat = (4 - t_c) * phi * theta_d,
// so U_mat = phi * U_auc identically. The ratio is undefined when t_c = 4
// (zero time saving); note the auction-side formula here carries no payment
// term, and with phi < 1 the matching utility is the smaller of the two
// whenever U_auc > 0.
struct ComparisonUtilities {
  double u_auction = 0.0;
  double u_matching = 0.0;
  std::optional<double> ratio;  // u_matching / u_auction, absent when degenerate
};

inline ComparisonUtilities matching_comparison_utilities(double theta_d, double t_c, double phi) {
  if (!(theta_d > 0)) throw std::invalid_argument("auction: value of time must be > 0");
  if (!(phi > 0 && phi < 1)) throw std::invalid_argument("auction: phi must be in (0, 1)");
  ComparisonUtilities out;
  out.u_auction = theta_d * (4.0 - t_c);
  out.u_matching = (4.0 - t_c) * phi * theta_d;
  if (out.u_auction != 0.0) out.ratio = out.u_matching / out.u_auction;
  return out;
}

}  // namespace tollmatch

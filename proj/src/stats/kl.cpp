#include <algorithm>
#include <cmath>
#include <set>

#include "ambig/csv.hpp"
#include "ambig/error.hpp"
#include "ambig/stats.hpp"

namespace ambig::stats {

KlReport kl_contributions(const corpus::Histogram& p_counts, const corpus::Histogram& q_counts,
                          double smoothing) {
  if (p_counts.total <= 0 || q_counts.total <= 0) {
    throw InvalidArgument("kl: both histograms need a positive total");
  }
  if (!(smoothing > 0.0)) throw InvalidArgument("kl: smoothing must be positive");

  std::set<std::string> vocab;
  for (const auto& [w, c] : p_counts.counts) vocab.insert(w);
  for (const auto& [w, c] : q_counts.counts) vocab.insert(w);
  const double v = static_cast<double>(vocab.size());
  const double p_denom = static_cast<double>(p_counts.total) + smoothing * v;
  const double q_denom = static_cast<double>(q_counts.total) + smoothing * v;

  KlReport report;
  report.smoothing = smoothing;
  report.contributions.reserve(vocab.size());
  for (const auto& w : vocab) {
    KlEntry e;
    e.word = w;
    e.p = (static_cast<double>(p_counts.count(w)) + smoothing) / p_denom;
    e.q = (static_cast<double>(q_counts.count(w)) + smoothing) / q_denom;
    e.contribution = e.p * std::log(e.p / e.q);
    report.contributions.push_back(std::move(e));
  }

  // Summed in word order so the total does not depend on the ranking.
  for (const auto& e : report.contributions) report.divergence += e.contribution;
  std::stable_sort(report.contributions.begin(), report.contributions.end(),
                   [](const KlEntry& a, const KlEntry& b) { return a.contribution > b.contribution; });
  return report;
}

std::string kl_to_csv(const KlReport& report) {
  std::string out = "word,p,q,contribution\n";
  for (const auto& e : report.contributions) {
    out += csv_field(e.word) + ',' + csv_number(e.p) + ',' + csv_number(e.q) + ',' +
           csv_number(e.contribution) + '\n';
  }
  return out;
}

corpus::Histogram filter_names(const corpus::Histogram& h, const corpus::Stoplist& names) {
  corpus::Histogram out;
  for (const auto& [w, c] : h.counts) {
    if (!names.contains(w)) out.add(w, c);
  }
  return out;
}

}  // namespace ambig::stats

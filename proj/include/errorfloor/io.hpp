#ifndef ERRORFLOOR_IO_HPP
#define ERRORFLOOR_IO_HPP

#include <iosfwd>
#include <string>

#include "errorfloor/boundary.hpp"
#include "errorfloor/simulate.hpp"

namespace ef {

// Catalog line format: 1-based support indices, then a, b, elementary (0/1),
// discovery count.  '#' header lines carry the search parameters and totals.
void write_catalog(std::ostream& out, const TsCatalog& catalog);
void write_catalog_csv(std::ostream& out, const TsCatalog& catalog);
TsCatalog read_catalog(std::istream& in, int n);

// Per-class dominance table, smallest distance first, with the probe SNR labelled.
void write_dominance_csv(std::ostream& out, const std::vector<DominanceRow>& table,
                         double probe_eb_no_db);

// Per-entry boundary detail (support plus epsilon*, d_e2, bracketing); the
// catalog read back from this carries the probe results.
void write_entry_details_csv(std::ostream& out, const TsCatalog& catalog, double probe_eb_no_db);
TsCatalog read_entry_details_csv(std::istream& in, int n);

struct ResultRecord {
    std::string source;  // "mc" or "is"
    double eb_no_db = 0.0;
    long trials = 0;
    long hits = 0;
    long intended_hits = 0;
    double p_f_hat = 0.0;
    double p_b_hat = 0.0;
    double v_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long new_event_count = 0;
    double wall_seconds = 0.0;
};

void write_results_csv(std::ostream& out, const std::vector<ResultRecord>& rows);
void write_results_records(std::ostream& out, const std::vector<ResultRecord>& rows);
std::vector<ResultRecord> read_results_csv(std::istream& in);

// Merge per-SNR rows from several runs into one curve file.  When
// q_multiplicity > 0, a reference column A*Q(sqrt(2*w*Es/No)) is added per
// row from the dominant-event parameters (A, w).
void write_merged_report(std::ostream& out, const std::vector<ResultRecord>& rows,
                         long q_multiplicity, double q_weight, double rate);

}  // namespace ef

#endif

#include "errorfloor/io.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace ef {

namespace {

void write_params_header(std::ostream& out, const TsCatalog& catalog) {
    const auto& p = catalog.params;
    out << "# errorfloor catalog\n";
    out << "# epsilon1=" << p.epsilon1;
    if (p.epsilon2_used())
        out << " epsilon2=" << p.epsilon2;
    else
        out << " epsilon2=-";
    out << " gamma=" << p.gamma << " eb_no_db=" << p.eb_no_db << " v_num=" << p.v_num
        << " tree_depth=" << p.tree_depth << " degree_cutoff=" << p.degree_cutoff << "\n";
    out << "# decodings=" << catalog.decodings << " mean_iterations=" << catalog.mean_iterations
        << " wall_seconds=" << catalog.wall_seconds << "\n";
}

void parse_params_header(const std::string& line, TsCatalog& catalog) {
    std::istringstream ss(line.substr(1));
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        auto& p = catalog.params;
        if (key == "epsilon1") p.epsilon1 = std::stod(val);
        else if (key == "epsilon2") p.epsilon2 = (val == "-") ? -1.0 : std::stod(val);
        else if (key == "gamma") p.gamma = std::stod(val);
        else if (key == "eb_no_db") p.eb_no_db = std::stod(val);
        else if (key == "v_num") p.v_num = std::stoi(val);
        else if (key == "tree_depth") p.tree_depth = std::stoi(val);
        else if (key == "degree_cutoff") p.degree_cutoff = std::stoi(val);
        else if (key == "decodings") catalog.decodings = std::stol(val);
        else if (key == "mean_iterations") catalog.mean_iterations = std::stod(val);
        else if (key == "wall_seconds") catalog.wall_seconds = std::stod(val);
    }
}

}  // namespace

void write_catalog(std::ostream& out, const TsCatalog& catalog) {
    write_params_header(out, catalog);
    for (const auto& [key, rec] : catalog.entries) {
        for (int v : rec.support.support) out << v + 1 << ' ';
        out << rec.cls.a << ' ' << rec.cls.b << ' ' << (rec.cls.elementary ? 1 : 0) << ' '
            << rec.discovery_count << '\n';
    }
}

void write_catalog_csv(std::ostream& out, const TsCatalog& catalog) {
    out << "support,a,b,elementary,count\n";
    for (const auto& [key, rec] : catalog.entries) {
        for (size_t i = 0; i < rec.support.support.size(); ++i)
            out << rec.support.support[i] + 1 << (i + 1 < rec.support.support.size() ? ' ' : ',');
        out << rec.cls.a << ',' << rec.cls.b << ',' << (rec.cls.elementary ? 1 : 0) << ','
            << rec.discovery_count << '\n';
    }
}

TsCatalog read_catalog(std::istream& in, int n) {
    TsCatalog catalog;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            parse_params_header(line, catalog);
            continue;
        }
        std::istringstream ss(line);
        std::vector<long> tokens;
        long x;
        while (ss >> x) tokens.push_back(x);
        if (tokens.size() < 5)
            throw std::runtime_error("catalog line " + std::to_string(line_no) + ": too few fields");
        long count = tokens.back();
        int elem = static_cast<int>(tokens[tokens.size() - 2]);
        int b = static_cast<int>(tokens[tokens.size() - 3]);
        int a = static_cast<int>(tokens[tokens.size() - 4]);
        std::vector<int> support;
        for (size_t i = 0; i + 4 < tokens.size(); ++i)
            support.push_back(static_cast<int>(tokens[i]) - 1);
        if (static_cast<int>(support.size()) != a)
            throw std::runtime_error("catalog line " + std::to_string(line_no) +
                                     ": support size disagrees with a");
        TsRecord rec;
        rec.support = BitPattern(support, n);
        rec.cls.a = a;
        rec.cls.b = b;
        rec.cls.elementary = elem != 0;
        rec.discovery_count = count;
        catalog.entries[rec.support.support] = rec;
    }
    return catalog;
}

void write_dominance_csv(std::ostream& out, const std::vector<DominanceRow>& table,
                         double probe_eb_no_db) {
    out << "# probe_eb_no_db=" << probe_eb_no_db << "\n";
    out << "error_class,multiplicity,d_e2,ts_elem,min_d_e2,non_bracketed\n";
    for (const auto& row : table) {
        out << '(' << row.a << ';' << row.b << ')' << ',' << row.multiplicity << ','
            << std::setprecision(10) << row.mean_d_e2 << ',' << row.elementary << ','
            << row.min_d_e2 << ',' << row.non_bracketed << '\n';
    }
}

void write_entry_details_csv(std::ostream& out, const TsCatalog& catalog, double probe_eb_no_db) {
    out << "# probe_eb_no_db=" << probe_eb_no_db << "\n";
    out << "support,a,b,elementary,count,epsilon_star,d_e2,bracketed\n";
    out << std::setprecision(17);
    for (const auto& [key, rec] : catalog.entries) {
        if (!rec.probed) continue;
        for (size_t i = 0; i < rec.support.support.size(); ++i)
            out << rec.support.support[i] + 1 << (i + 1 < rec.support.support.size() ? ' ' : ',');
        out << rec.cls.a << ',' << rec.cls.b << ',' << (rec.cls.elementary ? 1 : 0) << ','
            << rec.discovery_count << ',' << rec.epsilon_star << ',' << rec.d_e2 << ','
            << (rec.bracketed ? 1 : 0) << '\n';
    }
}

TsCatalog read_entry_details_csv(std::istream& in, int n) {
    TsCatalog catalog;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw std::runtime_error("bad entry detail row: " + line);
        std::vector<int> support;
        std::istringstream sup(fields[0]);
        int v;
        while (sup >> v) support.push_back(v - 1);
        TsRecord rec;
        rec.support = BitPattern(support, n);
        rec.cls.a = std::stoi(fields[1]);
        rec.cls.b = std::stoi(fields[2]);
        rec.cls.elementary = std::stoi(fields[3]) != 0;
        rec.discovery_count = std::stol(fields[4]);
        rec.epsilon_star = std::stod(fields[5]);
        rec.d_e2 = std::stod(fields[6]);
        rec.bracketed = std::stoi(fields[7]) != 0;
        rec.probed = true;
        catalog.entries[rec.support.support] = rec;
    }
    return catalog;
}

namespace {
const char* kResultsHeader =
    "source,eb_no_db,trials,hits,intended_hits,p_f_hat,p_b_hat,v_hat,ci_low,ci_high,"
    "new_events,wall_seconds";
}

void write_results_csv(std::ostream& out, const std::vector<ResultRecord>& rows) {
    out << kResultsHeader << '\n' << std::setprecision(12);
    for (const auto& r : rows) {
        out << r.source << ',' << r.eb_no_db << ',' << r.trials << ',' << r.hits << ','
            << r.intended_hits << ',' << r.p_f_hat << ',' << r.p_b_hat << ',' << r.v_hat << ','
            << r.ci_low << ',' << r.ci_high << ',' << r.new_event_count << ',' << r.wall_seconds
            << '\n';
    }
}

void write_results_records(std::ostream& out, const std::vector<ResultRecord>& rows) {
    out << std::setprecision(12);
    for (const auto& r : rows) {
        out << "source=" << r.source << " eb_no_db=" << r.eb_no_db << " trials=" << r.trials
            << " hits=" << r.hits << " intended_hits=" << r.intended_hits
            << " p_f_hat=" << r.p_f_hat << " p_b_hat=" << r.p_b_hat << " v_hat=" << r.v_hat
            << " ci_low=" << r.ci_low << " ci_high=" << r.ci_high
            << " new_events=" << r.new_event_count << " wall_seconds=" << r.wall_seconds << '\n';
    }
}

std::vector<ResultRecord> read_results_csv(std::istream& in) {
    std::vector<ResultRecord> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("source,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 12) throw std::runtime_error("bad results row: " + line);
        ResultRecord r;
        r.source = f[0];
        r.eb_no_db = std::stod(f[1]);
        r.trials = std::stol(f[2]);
        r.hits = std::stol(f[3]);
        r.intended_hits = std::stol(f[4]);
        r.p_f_hat = std::stod(f[5]);
        r.p_b_hat = std::stod(f[6]);
        r.v_hat = std::stod(f[7]);
        r.ci_low = std::stod(f[8]);
        r.ci_high = std::stod(f[9]);
        r.new_event_count = std::stol(f[10]);
        r.wall_seconds = std::stod(f[11]);
        rows.push_back(r);
    }
    return rows;
}

void write_merged_report(std::ostream& out, const std::vector<ResultRecord>& rows,
                         long q_multiplicity, double q_weight, double rate) {
    std::vector<ResultRecord> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [](const ResultRecord& x, const ResultRecord& y) {
        if (x.eb_no_db != y.eb_no_db) return x.eb_no_db < y.eb_no_db;
        return x.source < y.source;
    });
    out << kResultsHeader;
    if (q_multiplicity > 0) out << ",q_proxy";
    out << '\n' << std::setprecision(12);
    for (const auto& r : sorted) {
        out << r.source << ',' << r.eb_no_db << ',' << r.trials << ',' << r.hits << ','
            << r.intended_hits << ',' << r.p_f_hat << ',' << r.p_b_hat << ',' << r.v_hat << ','
            << r.ci_low << ',' << r.ci_high << ',' << r.new_event_count << ',' << r.wall_seconds;
        if (q_multiplicity > 0) {
            ChannelModel ch(r.eb_no_db, rate);
            out << ',' << q_multiplicity * q_function(std::sqrt(2.0 * q_weight * ch.es_no()));
        }
        out << '\n';
    }
}

}  // namespace ef

#include "hfstrat/cohort_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hfstrat/log.hpp"

namespace hfstrat {

namespace {

// Minimal CSV splitting with double-quote support.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && p == last && std::isfinite(out);
}

std::string feature_to_cell(const FeatureSpec& spec, const FeatureValue& v) {
    if (spec.kind == FeatureKind::Categorical) {
        return csv_escape(std::get<std::string>(v));
    }
    return format_double(std::get<double>(v));
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<RawPatientRecord> load_cohort(const std::filesystem::path& path,
                                          const CohortSchema& schema,
                                          LoadReport* report,
                                          const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cohort file: " + path.string());

    LoadReport local;
    LoadReport& rep = report ? *report : local;

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("cohort file has no header row");
    const auto header = split_csv_line(line);

    constexpr int kMissing = -1;
    int col_id = kMissing, col_char = kMissing, col_death = kMissing, col_follow = kMissing;
    int col_diagnosis = kMissing;
    std::vector<int> feature_col(schema.features.size(), kMissing);

    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& name = header[c];
        if (name == "id") col_id = static_cast<int>(c);
        else if (name == "characterization_date") col_char = static_cast<int>(c);
        else if (name == "death_date") col_death = static_cast<int>(c);
        else if (name == "last_followup_date") col_follow = static_cast<int>(c);
        else if (options.split_diagnosis && name == "Diagnosis") col_diagnosis = static_cast<int>(c);
        else {
            bool known = false;
            for (std::size_t f = 0; f < schema.features.size(); ++f) {
                if (schema.features[f].name == name) {
                    feature_col[f] = static_cast<int>(c);
                    known = true;
                    break;
                }
            }
            if (!known) {
                rep.warnings.push_back("ignoring unknown column '" + name + "'");
                HFSTRAT_WARN("load_cohort: ignoring unknown column '%s'", name.c_str());
            }
        }
    }
    if (col_id == kMissing || col_char == kMissing) {
        throw std::runtime_error("malformed header: id and characterization_date are required");
    }

    std::vector<RawPatientRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++rep.rows_read;
        const auto cells = split_csv_line(line);
        auto cell = [&](int c) -> std::string {
            return (c >= 0 && static_cast<std::size_t>(c) < cells.size()) ? cells[c] : "";
        };

        RawPatientRecord rec;
        rec.id = cell(col_id);
        std::string err;

        const std::string char_s = cell(col_char);
        if (auto d = parse_date(char_s)) {
            rec.characterization_date = *d;
        } else {
            err = "unparseable characterization_date '" + char_s + "'";
        }
        auto opt_date = [&](int col, const char* what) -> std::optional<Date> {
            const std::string s = cell(col);
            if (s.empty()) return std::nullopt;
            auto d = parse_date(s);
            if (!d && err.empty()) err = std::string("unparseable ") + what + " '" + s + "'";
            return d;
        };
        rec.death_date = opt_date(col_death, "death_date");
        rec.last_followup_date = opt_date(col_follow, "last_followup_date");

        if (err.empty()) {
            if (rec.death_date &&
                days_between(rec.characterization_date, *rec.death_date) < 0) {
                err = "death_date precedes characterization_date";
            } else if (rec.last_followup_date &&
                       days_between(rec.characterization_date, *rec.last_followup_date) < 0) {
                err = "last_followup_date precedes characterization_date";
            }
        }

        for (std::size_t f = 0; f < schema.features.size() && err.empty(); ++f) {
            const auto& spec = schema.features[f];
            std::string raw;
            if (col_diagnosis != kMissing &&
                (spec.name == "Primary_Diagnosis" || spec.name == "Secondary_Diagnosis")) {
                const std::string diag = cell(col_diagnosis);
                const auto sep = diag.find(options.diagnosis_separator);
                if (spec.name == "Primary_Diagnosis") {
                    raw = sep == std::string::npos ? diag : diag.substr(0, sep);
                } else {
                    raw = sep == std::string::npos ? (diag.empty() ? "" : "None")
                                                   : diag.substr(sep + 1);
                }
            } else {
                if (feature_col[f] == kMissing) continue;  // absent column = missing value
                raw = cell(feature_col[f]);
            }
            if (raw.empty()) continue;  // empty cell = missing value
            if (spec.kind == FeatureKind::Categorical) {
                rec.values[spec.name] = raw;
            } else {
                double v = 0.0;
                if (!parse_double(raw, v)) {
                    err = "non-numeric value '" + raw + "' in field '" + spec.name + "'";
                } else {
                    rec.values[spec.name] = v;
                }
            }
        }

        if (!err.empty()) {
            rep.row_errors.push_back({line_no, err});
        } else {
            records.push_back(std::move(rec));
        }
    }
    return records;
}

void write_cohort_csv(const std::filesystem::path& path,
                      const std::vector<RawPatientRecord>& records,
                      const CohortSchema& schema) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write cohort file: " + path.string());

    out << "id,characterization_date,death_date,last_followup_date";
    for (const auto& f : schema.features) out << "," << csv_escape(f.name);
    out << "\n";

    for (const auto& r : records) {
        out << csv_escape(r.id) << "," << format_date(r.characterization_date) << ","
            << (r.death_date ? format_date(*r.death_date) : "") << ","
            << (r.last_followup_date ? format_date(*r.last_followup_date) : "");
        for (const auto& f : schema.features) {
            out << ",";
            auto it = r.values.find(f.name);
            if (it != r.values.end()) out << feature_to_cell(f, it->second);
        }
        out << "\n";
    }
}

void write_labeled_csv(const std::filesystem::path& path, const LabeledCohort& cohort) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write labeled file: " + path.string());

    out << "id";
    for (const auto& f : cohort.schema.features) out << "," << csv_escape(f.name);
    out << ",lifespan,censored,label\n";

    for (std::size_t i = 0; i < cohort.size(); ++i) {
        const auto& r = cohort.records[i];
        out << csv_escape(r.id);
        for (const auto& f : cohort.schema.features) {
            out << "," << feature_to_cell(f, r.values.at(f.name));
        }
        out << "," << cohort.lifespans[i] << "," << (cohort.censored[i] ? 1 : 0) << ","
            << cohort.labels[i] << "\n";
    }
}

LabeledCohort load_labeled_cohort(const std::filesystem::path& path,
                                  const CohortSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labeled file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("labeled file has no header row");
    const auto header = split_csv_line(line);

    std::vector<int> feature_col(schema.features.size(), -1);
    int col_id = -1, col_life = -1, col_cens = -1, col_label = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& name = header[c];
        if (name == "id") col_id = static_cast<int>(c);
        else if (name == "lifespan") col_life = static_cast<int>(c);
        else if (name == "censored") col_cens = static_cast<int>(c);
        else if (name == "label") col_label = static_cast<int>(c);
        else {
            for (std::size_t f = 0; f < schema.features.size(); ++f) {
                if (schema.features[f].name == name) feature_col[f] = static_cast<int>(c);
            }
        }
    }
    if (col_id < 0 || col_label < 0) {
        throw std::runtime_error("malformed labeled header: id and label are required");
    }
    for (std::size_t f = 0; f < schema.features.size(); ++f) {
        if (feature_col[f] < 0) {
            throw std::runtime_error("labeled file missing feature column '" +
                                     schema.features[f].name + "'");
        }
    }

    LabeledCohort cohort;
    cohort.schema = schema;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        auto cell = [&](int c) -> std::string {
            return (c >= 0 && static_cast<std::size_t>(c) < cells.size()) ? cells[c] : "";
        };
        RawPatientRecord rec;
        rec.id = cell(col_id);
        for (std::size_t f = 0; f < schema.features.size(); ++f) {
            const auto& spec = schema.features[f];
            const std::string raw = cell(feature_col[f]);
            if (spec.kind == FeatureKind::Categorical) {
                rec.values[spec.name] = raw;
            } else {
                double v = 0.0;
                if (!parse_double(raw, v)) {
                    throw std::runtime_error("labeled file line " + std::to_string(line_no) +
                                             ": non-numeric value in '" + spec.name + "'");
                }
                rec.values[spec.name] = v;
            }
            if (!spec.in_domain(rec.values[spec.name])) {
                throw std::runtime_error("labeled file line " + std::to_string(line_no) +
                                         ": out-of-domain value in '" + spec.name + "'");
            }
        }
        const std::string label_s = cell(col_label);
        if (label_s != "0" && label_s != "1") {
            throw std::runtime_error("labeled file line " + std::to_string(line_no) +
                                     ": label must be 0 or 1");
        }
        cohort.labels.push_back(label_s == "1" ? 1 : 0);
        cohort.lifespans.push_back(col_life >= 0 ? std::stol(cell(col_life)) : 0);
        cohort.censored.push_back(col_cens >= 0 && cell(col_cens) == "1");
        cohort.records.push_back(std::move(rec));
    }
    if (cohort.records.empty()) throw std::runtime_error("labeled file has no data rows");
    return cohort;
}

}  // namespace hfstrat

#include "tfs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "tfs/error.hpp"
#include "tfs/random.hpp"

namespace tfs {
namespace {

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end || cell.empty()) return std::nullopt;
    return v;
}

// Numeric labels sort by value, anything else lexicographically.
std::vector<std::string> sorted_classes(const std::vector<std::string>& raw) {
    std::set<std::string> distinct(raw.begin(), raw.end());
    std::vector<std::string> out(distinct.begin(), distinct.end());
    const bool numeric = std::all_of(out.begin(), out.end(), [](const std::string& s) {
        const auto v = parse_number(s);
        return v && std::isfinite(*v);
    });
    if (numeric) {
        std::stable_sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
            return *parse_number(a) < *parse_number(b);
        });
    }
    return out;
}

std::map<int, std::vector<std::size_t>> indices_by_class(const FeatureMatrix& data) {
    std::map<int, std::vector<std::size_t>> by_class;
    const auto& labels = *data.labels;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    return by_class;
}

// Integer table with the given row and column totals whose entry (z, f)
// is the floor or ceiling of rows[z] * cols[f] / total. The fractional
// quotas are a feasible transport plan, so an integral one exists; it is
// found by augmenting paths over the entries with a nonzero remainder.
std::vector<std::vector<std::size_t>> controlled_rounding(const std::vector<std::size_t>& rows,
                                                          const std::vector<std::size_t>& cols) {
    const std::size_t total = std::accumulate(rows.begin(), rows.end(), std::size_t{0});
    const std::size_t nr = rows.size(), nc = cols.size();
    std::vector<std::vector<std::size_t>> table(nr, std::vector<std::size_t>(nc));
    std::vector<std::vector<char>> open(nr, std::vector<char>(nc, 0));
    std::vector<std::size_t> row_need(nr), col_need(cols);
    for (std::size_t z = 0; z < nr; ++z) {
        std::size_t sum = 0;
        for (std::size_t f = 0; f < nc; ++f) {
            const std::size_t scaled = rows[z] * cols[f];
            table[z][f] = scaled / total;
            open[z][f] = scaled % total != 0;
            sum += table[z][f];
            col_need[f] -= table[z][f];
        }
        row_need[z] = rows[z] - sum;
    }

    // used[z][f] = 1 when the entry was rounded up
    std::vector<std::vector<char>> used(nr, std::vector<char>(nc, 0));
    std::vector<std::size_t> col_used(nc, 0);
    for (std::size_t z = 0; z < nr; ++z) {
        for (std::size_t unit = 0; unit < row_need[z]; ++unit) {
            // BFS over alternating paths: row -(unused open)-> col -(used)-> row
            std::vector<long> col_from(nc, -1), row_from(nr, -1);
            std::vector<char> row_seen(nr, 0);
            std::vector<std::size_t> queue{z};
            row_seen[z] = 1;
            long found = -1;
            for (std::size_t head = 0; head < queue.size() && found < 0; ++head) {
                const std::size_t r = queue[head];
                for (std::size_t f = 0; f < nc && found < 0; ++f) {
                    if (!open[r][f] || used[r][f] || col_from[f] >= 0) continue;
                    col_from[f] = static_cast<long>(r);
                    if (col_used[f] < col_need[f]) {
                        found = static_cast<long>(f);
                        break;
                    }
                    for (std::size_t r2 = 0; r2 < nr; ++r2) {
                        if (used[r2][f] && !row_seen[r2]) {
                            row_seen[r2] = 1;
                            row_from[r2] = static_cast<long>(f);
                            queue.push_back(r2);
                        }
                    }
                }
            }
            if (found < 0) throw NumericError("stratified fold assignment failed");
            ++col_used[static_cast<std::size_t>(found)];
            for (long f = found; f >= 0;) {
                const auto r = static_cast<std::size_t>(col_from[static_cast<std::size_t>(f)]);
                used[r][static_cast<std::size_t>(f)] = 1;
                const long back = row_from[r];
                if (back >= 0) used[r][static_cast<std::size_t>(back)] = 0;
                f = r == z ? -1 : back;
            }
        }
    }
    for (std::size_t z = 0; z < nr; ++z)
        for (std::size_t f = 0; f < nc; ++f) table[z][f] += used[z][f];
    return table;
}

}  // namespace

void FeatureMatrix::validate() const {
    if (feature_names.size() != features())
        throw ValidationError("feature name count does not match column count");
    std::set<std::string> seen;
    for (const auto& name : feature_names)
        if (!seen.insert(name).second) throw ValidationError("duplicate feature name '" + name + "'");
    for (double v : values.data())
        if (!std::isfinite(v)) throw ValidationError("feature matrix contains a non-finite value");
    if (labels) {
        if (labels->size() != samples()) throw ValidationError("label count does not match sample count");
        for (int c : *labels)
            if (c < 0 || static_cast<std::size_t>(c) >= class_names.size())
                throw ValidationError("label outside the class set");
    }
}

FeatureMatrix FeatureMatrix::subset_rows(std::span<const std::size_t> rows) const {
    FeatureMatrix out;
    out.values = Matrix(rows.size(), features());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = values.row(rows[r]);
        std::copy(src.begin(), src.end(), out.values.row(r).begin());
    }
    out.feature_names = feature_names;
    out.class_names = class_names;
    if (labels) {
        std::vector<int> l(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) l[r] = (*labels)[rows[r]];
        out.labels = std::move(l);
    }
    return out;
}

FeatureMatrix FeatureMatrix::subset_columns(std::span<const std::size_t> cols) const {
    FeatureMatrix out;
    out.values = Matrix(samples(), cols.size());
    for (std::size_t r = 0; r < samples(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out.values(r, c) = values(r, cols[c]);
    out.feature_names.reserve(cols.size());
    for (auto c : cols) out.feature_names.push_back(feature_names.at(c));
    out.labels = labels;
    out.class_names = class_names;
    return out;
}

std::vector<double> FeatureMatrix::column(std::size_t j) const {
    std::vector<double> col(samples());
    for (std::size_t r = 0; r < samples(); ++r) col[r] = values(r, j);
    return col;
}

FeatureMatrix parse_csv(std::string_view text, const std::optional<std::string>& label_column,
                        std::string_view source) {
    std::vector<std::string_view> lines;
    {
        std::size_t start = 0;
        while (start < text.size()) {
            auto nl = text.find('\n', start);
            if (nl == std::string_view::npos) nl = text.size();
            lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }
    // Trailing blank lines are tolerated, interior ones are not.
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw IoError(std::string(source) + ": empty file, header row required");

    auto header = split_line(lines[0]);
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].remove_prefix(3);
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (auto h : header) {
        std::string name(trim(h));
        if (!seen.insert(name).second)
            throw ValidationError(std::string(source) + ": duplicate header name '" + name + "'");
        names.push_back(std::move(name));
    }

    std::optional<std::size_t> label_pos;
    if (label_column) {
        const auto it = std::find(names.begin(), names.end(), *label_column);
        if (it == names.end())
            throw ValidationError(std::string(source) + ": label column '" + *label_column + "' not found");
        label_pos = static_cast<std::size_t>(it - names.begin());
    }

    FeatureMatrix out;
    for (std::size_t c = 0; c < names.size(); ++c)
        if (c != label_pos) out.feature_names.push_back(names[c]);

    const std::size_t rows = lines.size() - 1;
    out.values = Matrix(rows, out.feature_names.size());
    std::vector<std::string> raw_labels;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t line_no = r + 2;
        const auto cells = split_line(lines[r + 1]);
        if (cells.size() != names.size()) {
            throw IoError(std::string(source) + ": row " + std::to_string(line_no) + " has " +
                          std::to_string(cells.size()) + " cells, expected " + std::to_string(names.size()));
        }
        std::size_t out_col = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto cell = trim(cells[c]);
            if (c == label_pos) {
                raw_labels.emplace_back(cell);
                continue;
            }
            const auto v = parse_number(cell);
            if (!v || !std::isfinite(*v)) {
                throw IoError(std::string(source) + ": cannot parse row " + std::to_string(line_no) +
                              ", column \"" + names[c] + "\": '" + std::string(cell) + "'");
            }
            out.values(r, out_col++) = *v;
        }
    }

    if (label_pos) {
        out.class_names = sorted_classes(raw_labels);
        std::map<std::string, int> index;
        for (std::size_t i = 0; i < out.class_names.size(); ++i) index[out.class_names[i]] = static_cast<int>(i);
        std::vector<int> labels(rows);
        for (std::size_t r = 0; r < rows; ++r) labels[r] = index.at(raw_labels[r]);
        out.labels = std::move(labels);
    }
    return out;
}

FeatureMatrix load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), label_column, path.string());
}

SplitResult stratified_split(const FeatureMatrix& data, double test_fraction, std::uint64_t seed) {
    if (!data.has_labels()) throw ValidationError("stratified split requires labels");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ValidationError("test_fraction must lie in (0, 1)");

    auto by_class = indices_by_class(data);
    for (const auto& [c, idx] : by_class)
        if (idx.size() < 2)
            throw ValidationError("class '" + data.class_names[c] + "' has fewer than 2 samples, cannot stratify");

    const std::size_t total = data.samples();
    const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(total) * test_fraction));
    if (target == 0 || target >= total)
        throw ValidationError("test_fraction leaves the train or test part empty");

    // Hamilton apportionment of the test size over the classes, on the exact
    // quotas count * target / total (integer arithmetic, so remainders
    // compare exactly). Every class lands on the floor or ceiling of its
    // quota in both parts.
    struct Share {
        int label;
        std::size_t count;
        std::size_t remainder;
    };
    std::vector<Share> shares;
    std::size_t assigned = 0;
    for (const auto& [c, idx] : by_class) {
        const std::size_t scaled = idx.size() * target;
        shares.push_back({c, scaled / total, scaled % total});
        assigned += scaled / total;
    }
    std::vector<std::size_t> order(shares.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return shares[a].remainder > shares[b].remainder; });
    for (std::size_t i = 0; assigned < target && i < order.size(); ++i, ++assigned) ++shares[order[i]].count;

    Rng rng(seed);
    SplitResult result;
    result.seed = seed;
    for (const auto& share : shares) {
        auto idx = by_class.at(share.label);
        shuffle(std::span<std::size_t>(idx), rng);
        result.test_indices.insert(result.test_indices.end(), idx.begin(), idx.begin() + share.count);
        result.train_indices.insert(result.train_indices.end(), idx.begin() + share.count, idx.end());
    }
    std::sort(result.train_indices.begin(), result.train_indices.end());
    std::sort(result.test_indices.begin(), result.test_indices.end());
    return result;
}

std::vector<std::size_t> non_constant_features(const Matrix& data) {
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < data.cols(); ++c) {
        bool constant = true;
        for (std::size_t r = 1; r < data.rows() && constant; ++r) constant = data(r, c) == data(0, c);
        if (!constant) kept.push_back(c);
    }
    return kept;
}

PruneResult prune_constant_features(const FeatureMatrix& train, std::span<const FeatureMatrix> others) {
    for (const auto& o : others) {
        if (o.features() != train.features())
            throw ValidationError("feature count mismatch between training and other matrices");
        if (o.feature_names != train.feature_names)
            throw ValidationError("feature names differ between training and other matrices");
    }
    PruneResult out;
    out.kept_indices = non_constant_features(train.values);
    out.train = train.subset_columns(out.kept_indices);
    for (const auto& o : others) out.others.push_back(o.subset_columns(out.kept_indices));
    return out;
}

double population_std(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / n);
}

Standardizer fit_standardizer(const FeatureMatrix& train) {
    const std::size_t rows = train.samples(), cols = train.features();
    if (rows == 0) throw ValidationError("cannot fit a standardizer on zero samples");
    Standardizer s{std::vector<double>(cols, 0.0), std::vector<double>(cols, 0.0)};
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r) sum += train.values(r, c);
        const double mean = sum / static_cast<double>(rows);
        double ss = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double d = train.values(r, c) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(rows));
        if (!(sd > 0.0))
            throw ValidationError("feature '" + train.feature_names[c] +
                                  "' has zero variance; prune constant features first");
        s.means[c] = mean;
        s.std_devs[c] = sd;
    }
    return s;
}

FeatureMatrix apply_standardizer(const Standardizer& s, const FeatureMatrix& data) {
    if (s.means.size() != data.features())
        throw ValidationError("standardizer was fitted on a different feature count");
    FeatureMatrix out = data;
    for (std::size_t r = 0; r < data.samples(); ++r)
        for (std::size_t c = 0; c < data.features(); ++c)
            out.values(r, c) = (data.values(r, c) - s.means[c]) / s.std_devs[c];
    return out;
}

std::vector<Fold> stratified_kfold(const FeatureMatrix& data, std::size_t k, std::uint64_t seed) {
    if (!data.has_labels()) throw ValidationError("stratified k-fold requires labels");
    if (k < 2) throw ValidationError("k-fold requires k >= 2");
    auto by_class = indices_by_class(data);
    for (const auto& [c, idx] : by_class)
        if (idx.size() < k)
            throw ValidationError("class '" + data.class_names[c] + "' has " + std::to_string(idx.size()) +
                                  " samples, fewer than k = " + std::to_string(k));

    std::vector<std::size_t> class_sizes;
    for (const auto& [c, idx] : by_class) class_sizes.push_back(idx.size());
    std::vector<std::size_t> fold_sizes(k, data.samples() / k);
    for (std::size_t f = 0; f < data.samples() % k; ++f) ++fold_sizes[f];
    const auto counts = controlled_rounding(class_sizes, fold_sizes);

    Rng rng(seed);
    std::vector<std::size_t> fold_of(data.samples());
    std::size_t z = 0;
    for (auto& [c, idx] : by_class) {
        shuffle(std::span<std::size_t>(idx), rng);
        std::size_t pos = 0;
        for (std::size_t f = 0; f < k; ++f)
            for (std::size_t i = 0; i < counts[z][f]; ++i) fold_of[idx[pos++]] = f;
        ++z;
    }
    std::vector<Fold> folds(k);
    for (std::size_t i = 0; i < data.samples(); ++i) {
        for (std::size_t f = 0; f < k; ++f) {
            if (fold_of[i] == f)
                folds[f].validation_indices.push_back(i);
            else
                folds[f].train_indices.push_back(i);
        }
    }
    return folds;
}

}  // namespace tfs

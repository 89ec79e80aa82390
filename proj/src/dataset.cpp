#include "tendeval/dataset.hpp"

#include "tendeval/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

namespace tendeval {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> ids)
{
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::size_t index_in(const std::vector<std::string>& sorted, const std::string& id)
{
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), id) -
                                    sorted.begin());
}

std::optional<std::size_t> find_in(const std::vector<std::string>& sorted, const std::string& id)
{
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
    if (it == sorted.end() || *it != id)
        return std::nullopt;
    return static_cast<std::size_t>(it - sorted.begin());
}

std::string pair_name(const std::string& annotator, const std::string& sample)
{
    return "(annotator '" + annotator + "', sample '" + sample + "')";
}

} // namespace

AnnotationSet AnnotationSet::from_records(const std::vector<AnnotationRecord>& records,
                                          LabelDomain domain)
{
    if (records.empty())
        throw InputError("annotation set has no records");
    if (domain.empty())
        throw InputError("label domain is empty");

    AnnotationSet set;
    set.domain_ = std::move(domain);
    {
        std::vector<std::string> annotators, samples;
        annotators.reserve(records.size());
        samples.reserve(records.size());
        for (const auto& r : records) {
            annotators.push_back(r.annotator_id);
            samples.push_back(r.sample_id);
        }
        set.annotators_ = sorted_unique(std::move(annotators));
        set.samples_ = sorted_unique(std::move(samples));
    }
    set.entries_.resize(set.annotators_.size());
    for (const auto& r : records) {
        if (!set.domain_.contains(r.label))
            throw InputError("label " + std::to_string(r.label) + " outside the label domain at " +
                             pair_name(r.annotator_id, r.sample_id));
        set.entries_[index_in(set.annotators_, r.annotator_id)].push_back(
            {index_in(set.samples_, r.sample_id), r.label});
    }
    for (std::size_t k = 0; k < set.entries_.size(); ++k) {
        auto& list = set.entries_[k];
        std::sort(list.begin(), list.end(),
                  [](const Entry& x, const Entry& y) { return x.sample < y.sample; });
        for (std::size_t i = 1; i < list.size(); ++i)
            if (list[i].sample == list[i - 1].sample)
                throw InputError("duplicate record for " +
                                 pair_name(set.annotators_[k], set.samples_[list[i].sample]));
    }
    return set;
}

AnnotationSet AnnotationSet::from_records_inferred(const std::vector<AnnotationRecord>& records)
{
    std::vector<Label> labels;
    labels.reserve(records.size());
    for (const auto& r : records)
        labels.push_back(r.label);
    return from_records(records, LabelDomain(std::move(labels)));
}

std::size_t AnnotationSet::label_count() const
{
    std::size_t n = 0;
    for (const auto& list : entries_)
        n += list.size();
    return n;
}

std::optional<std::size_t> AnnotationSet::annotator_index(const std::string& id) const
{
    return find_in(annotators_, id);
}

std::optional<std::size_t> AnnotationSet::sample_index(const std::string& id) const
{
    return find_in(samples_, id);
}

std::optional<Label> AnnotationSet::label(std::size_t annotator, std::size_t sample) const
{
    const auto& list = entries_.at(annotator);
    const auto it = std::lower_bound(list.begin(), list.end(), sample,
                                     [](const Entry& e, std::size_t s) { return e.sample < s; });
    if (it == list.end() || it->sample != sample)
        return std::nullopt;
    return it->label;
}

std::vector<AnnotationRecord> AnnotationSet::records() const
{
    std::vector<AnnotationRecord> out;
    out.reserve(label_count());
    for (std::size_t k = 0; k < annotators_.size(); ++k)
        for (const auto& e : entries_[k])
            out.push_back({samples_[e.sample], annotators_[k], e.label});
    return out;
}

bool AnnotationSet::same_keys(const AnnotationSet& other) const
{
    if (annotators_ != other.annotators_ || samples_ != other.samples_)
        return false;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const auto& a = entries_[k];
        const auto& b = other.entries_[k];
        if (a.size() != b.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].sample != b[i].sample)
                return false;
    }
    return true;
}

AnnotationSet restrict_to(const AnnotationSet& source, const AnnotationSet& reference)
{
    std::vector<AnnotationRecord> kept;
    for (const auto& r : source.records()) {
        const auto k = reference.annotator_index(r.annotator_id);
        const auto s = reference.sample_index(r.sample_id);
        if (k && s && reference.label(*k, *s))
            kept.push_back(r);
    }
    if (kept.empty())
        throw InputError("no (annotator, sample) keys shared with the reference annotations");
    return AnnotationSet::from_records(kept, source.domain());
}

VectorTable VectorTable::features(const std::vector<VectorRecord>& records)
{
    return build(records, VectorKind::feature);
}

VectorTable VectorTable::attentions(const std::vector<VectorRecord>& records)
{
    return build(records, VectorKind::attention);
}

VectorTable VectorTable::build(const std::vector<VectorRecord>& records, VectorKind kind)
{
    const char* what = kind == VectorKind::feature ? "feature" : "attention";
    if (records.empty())
        throw InputError(std::string(what) + " table has no records");

    VectorTable table;
    table.kind_ = kind;
    table.dimension_ = records.front().values.size();
    if (table.dimension_ == 0)
        throw InputError(std::string(what) + " vectors must have positive dimension");
    {
        std::vector<std::string> annotators, samples;
        for (const auto& r : records) {
            annotators.push_back(r.annotator_id);
            samples.push_back(r.sample_id);
        }
        table.annotators_ = sorted_unique(std::move(annotators));
        table.samples_ = sorted_unique(std::move(samples));
    }
    table.entries_.resize(table.annotators_.size());
    for (const auto& r : records) {
        const auto where = pair_name(r.annotator_id, r.sample_id);
        if (r.values.size() != table.dimension_)
            throw InputError(std::string(what) + " vector at " + where + " has dimension " +
                             std::to_string(r.values.size()) + ", expected " +
                             std::to_string(table.dimension_));
        std::vector<double> values = r.values;
        for (double v : values)
            if (!std::isfinite(v))
                throw InputError(std::string(what) + " vector at " + where +
                                 " has a non-finite entry");
        if (kind == VectorKind::attention) {
            CompensatedSum total;
            for (double v : values) {
                if (v < 0.0)
                    throw InputError("negative attention weight at " + where);
                total.add(v);
            }
            const double sum = total.value();
            if (!(sum > 0.0))
                throw InputError("attention weights at " + where + " sum to zero");
            // Already-normalized vectors are kept bit-for-bit so that
            // save/load is the identity.
            if (std::abs(sum - 1.0) > 1e-12)
                for (double& v : values)
                    v /= sum;
        }
        table.entries_[index_in(table.annotators_, r.annotator_id)].push_back(
            {index_in(table.samples_, r.sample_id), std::move(values)});
    }
    for (std::size_t k = 0; k < table.entries_.size(); ++k) {
        auto& list = table.entries_[k];
        std::sort(list.begin(), list.end(),
                  [](const Entry& x, const Entry& y) { return x.sample < y.sample; });
        for (std::size_t i = 1; i < list.size(); ++i)
            if (list[i].sample == list[i - 1].sample)
                throw InputError("duplicate " + std::string(what) + " record for " +
                                 pair_name(table.annotators_[k], table.samples_[list[i].sample]));
    }
    return table;
}

std::optional<std::size_t> VectorTable::annotator_index(const std::string& id) const
{
    return find_in(annotators_, id);
}

std::size_t VectorTable::entry_count() const
{
    std::size_t n = 0;
    for (const auto& list : entries_)
        n += list.size();
    return n;
}

std::vector<VectorRecord> VectorTable::records() const
{
    std::vector<VectorRecord> out;
    out.reserve(entry_count());
    for (std::size_t k = 0; k < annotators_.size(); ++k)
        for (const auto& e : entries_[k])
            out.push_back({samples_[e.sample], annotators_[k], e.values});
    return out;
}

std::size_t pair_slot(std::size_t size, std::size_t k, std::size_t l)
{
    if (k > l)
        std::swap(k, l);
    // Row-major upper triangle without the diagonal.
    return k * size - k * (k + 1) / 2 + (l - k - 1);
}

const std::vector<std::size_t>& OverlapIndex::shared(std::size_t k, std::size_t l) const
{
    if (k == l)
        throw InputError("OverlapIndex::shared: k == l");
    return pair_samples[pair_slot(size, k, l)];
}

OverlapIndex overlap_index(const AnnotationSet& ann, Exec exec)
{
    const std::size_t m = ann.annotator_count();
    OverlapIndex index;
    index.size = m;
    index.counts.assign(m * m, 0);
    index.pair_samples.resize(m * (m - 1) / 2);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(index.pair_samples.size());
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k + 1; l < m; ++l)
            pairs.emplace_back(k, l);

    for_each_index(exec, pairs.size(), [&](std::size_t p) {
        const auto [k, l] = pairs[p];
        const auto& a = ann.entries(k);
        const auto& b = ann.entries(l);
        auto& shared = index.pair_samples[p];
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].sample < b[j].sample) {
                ++i;
            } else if (b[j].sample < a[i].sample) {
                ++j;
            } else {
                shared.push_back(a[i].sample);
                ++i;
                ++j;
            }
        }
    });

    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [k, l] = pairs[p];
        index.counts[k * m + l] = index.counts[l * m + k] = index.pair_samples[p].size();
    }
    for (std::size_t k = 0; k < m; ++k)
        index.counts[k * m + k] = ann.entries(k).size();
    return index;
}

namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    return out;
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what)
{
    throw InputError(path.string() + ":" + std::to_string(line) + ": " + what);
}

template <class Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn)
{
    auto in = open_input(path);
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json record;
        try {
            record = json::parse(text);
        } catch (const json::parse_error& e) {
            fail_line(path, line, std::string("invalid JSON: ") + e.what());
        }
        if (!record.is_object())
            fail_line(path, line, "record is not a JSON object");
        try {
            fn(record, line);
        } catch (const json::exception& e) {
            fail_line(path, line, e.what());
        } catch (const InputError& e) {
            fail_line(path, line, e.what());
        }
    }
}

std::string require_string(const json& record, const char* key)
{
    const auto it = record.find(key);
    if (it == record.end() || !it->is_string())
        throw InputError(std::string("missing string field '") + key + "'");
    return it->get<std::string>();
}

std::vector<VectorRecord> read_vectors(const std::filesystem::path& path, const char* key)
{
    std::vector<VectorRecord> records;
    for_each_record(path, [&](const json& record, std::size_t) {
        VectorRecord r;
        r.sample_id = require_string(record, "sample_id");
        r.annotator_id = require_string(record, "annotator_id");
        const auto it = record.find(key);
        if (it == record.end() || !it->is_array())
            throw InputError(std::string("missing array field '") + key + "'");
        for (const auto& v : *it) {
            if (!v.is_number())
                throw InputError(std::string("non-numeric entry in '") + key + "'");
            r.values.push_back(v.get<double>());
        }
        records.push_back(std::move(r));
    });
    return records;
}

} // namespace

AnnotationSet load_annotations(const std::filesystem::path& path,
                               const std::optional<LabelDomain>& domain)
{
    std::vector<AnnotationRecord> records;
    for_each_record(path, [&](const json& record, std::size_t) {
        AnnotationRecord r;
        r.sample_id = require_string(record, "sample_id");
        r.annotator_id = require_string(record, "annotator_id");
        const auto it = record.find("label");
        if (it == record.end() || !it->is_number_integer())
            throw InputError("missing integer field 'label'");
        r.label = it->get<Label>();
        if (domain && !domain->contains(r.label))
            throw InputError("label " + std::to_string(r.label) + " outside the label domain");
        records.push_back(std::move(r));
    });
    try {
        return domain ? AnnotationSet::from_records(records, *domain)
                      : AnnotationSet::from_records_inferred(records);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void save_annotations(const std::filesystem::path& path, const AnnotationSet& ann)
{
    auto out = open_output(path);
    for (const auto& r : ann.records()) {
        json record = json::object();
        record["sample_id"] = r.sample_id;
        record["annotator_id"] = r.annotator_id;
        record["label"] = r.label;
        out << record.dump() << '\n';
    }
}

FeatureTable load_features(const std::filesystem::path& path)
{
    auto records = read_vectors(path, "vector");
    try {
        return VectorTable::features(records);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

AttentionTable load_attentions(const std::filesystem::path& path)
{
    auto records = read_vectors(path, "weights");
    try {
        return VectorTable::attentions(records);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void save_vectors(const std::filesystem::path& path, const VectorTable& table)
{
    const char* key = table.kind() == VectorKind::feature ? "vector" : "weights";
    auto out = open_output(path);
    for (const auto& r : table.records()) {
        json record = json::object();
        record["sample_id"] = r.sample_id;
        record["annotator_id"] = r.annotator_id;
        record[key] = r.values;
        out << record.dump() << '\n';
    }
}

} // namespace tendeval

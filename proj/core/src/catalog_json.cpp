#include "insightmap/catalog_json.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "insightmap/errors.hpp"
#include "json_codec.hpp"

namespace insightmap::json_codec {

namespace {

std::string escape_token(std::string_view token) {
    std::string out;
    for (char c : token) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

template <class Enum>
Enum read_enum(const Node& node, std::optional<Enum> (*parse)(std::string_view)) {
    const auto text = node.text();
    const auto value = parse(text);
    if (!value) node.fail("unknown value '" + text + "'");
    return *value;
}

std::string_view to_string(DistributionKind kind) {
    return kind == DistributionKind::histogram ? "histogram" : "frequency";
}

std::optional<DistributionKind> parse_distribution_kind(std::string_view text) {
    if (text == "histogram") return DistributionKind::histogram;
    if (text == "frequency") return DistributionKind::frequency;
    return std::nullopt;
}

Json series_json(const LabeledSeries& series) {
    Json out = Json::array();
    for (const auto& point : series) {
        out.push_back({{"label", point.label}, {"value", real(point.value)}});
    }
    return out;
}

LabeledSeries read_series(const Node& node) {
    LabeledSeries out;
    for (const auto& item : node.items()) {
        item.expect_keys({"label", "value"});
        out.push_back({item["label"].text(), item["value"].real()});
    }
    return out;
}

Json strings_json(const std::vector<std::string>& values) { return Json(values); }

std::vector<std::string> read_strings(const Node& node) {
    std::vector<std::string> out;
    for (const auto& item : node.items()) out.push_back(item.text());
    return out;
}

Json payload_json(const InsightPayload& payload) {
    struct Visitor {
        Json operator()(const TopOnePayload& p) const {
            return {{"leader", p.leader}, {"z", real(p.z)}, {"series", series_json(p.series)}};
        }
        Json operator()(const AttributionPayload& p) const {
            return {{"leader", p.leader},
                    {"share", real(p.share)},
                    {"shares", series_json(p.shares)},
                    {"series", series_json(p.series)}};
        }
        Json operator()(const ChangePointPayload& p) const {
            return {{"split", p.split},
                    {"splitValue", p.split_value},
                    {"meanBefore", real(p.mean_before)},
                    {"meanAfter", real(p.mean_after)},
                    {"t", real(p.t)},
                    {"pValue", real(p.p_value)},
                    {"series", series_json(p.series)}};
        }
        Json operator()(const OutlierPayload& p) const {
            return {{"outliers", strings_json(p.outliers)},
                    {"strongest", p.strongest},
                    {"maxZ", real(p.max_z)},
                    {"median", real(p.median)},
                    {"mad", real(p.mad)},
                    {"series", series_json(p.series)}};
        }
        Json operator()(const TrendPayload& p) const {
            return {{"slope", real(p.slope)},     {"intercept", real(p.intercept)},
                    {"r", real(p.r)},             {"pValue", real(p.p_value)},
                    {"increasing", p.increasing}, {"series", series_json(p.series)}};
        }
        Json operator()(const CorrelationPayload& p) const {
            return {{"r", real(p.r)},
                    {"otherSubspace", to_json(p.other_subspace)},
                    {"seriesA", series_json(p.series_a)},
                    {"seriesB", series_json(p.series_b)}};
        }
        Json operator()(const CrossMeasurePayload& p) const {
            return {{"r", real(p.r)},
                    {"measureA", p.measure_a},
                    {"measureB", p.measure_b},
                    {"seriesA", series_json(p.series_a)},
                    {"seriesB", series_json(p.series_b)}};
        }
        Json operator()(const ClusteringPayload& p) const {
            return {{"gap", real(p.gap)},
                    {"meanOtherGaps", real(p.mean_other_gaps)},
                    {"low", strings_json(p.low)},
                    {"high", strings_json(p.high)},
                    {"series", series_json(p.series)}};
        }
    };
    return std::visit(Visitor{}, payload);
}

InsightPayload read_payload(InsightType type, const Node& n) {
    switch (type) {
        case InsightType::TopOne: {
            n.expect_keys({"leader", "z", "series"});
            return TopOnePayload{n["leader"].text(), n["z"].real(), read_series(n["series"])};
        }
        case InsightType::Attribution: {
            n.expect_keys({"leader", "share", "shares", "series"});
            return AttributionPayload{n["leader"].text(), n["share"].real(), read_series(n["shares"]),
                                      read_series(n["series"])};
        }
        case InsightType::ChangePoint: {
            n.expect_keys({"split", "splitValue", "meanBefore", "meanAfter", "t", "pValue", "series"});
            return ChangePointPayload{n["split"].count(),     n["splitValue"].text(), n["meanBefore"].real(),
                                      n["meanAfter"].real(),  n["t"].real(),          n["pValue"].real(),
                                      read_series(n["series"])};
        }
        case InsightType::Outlier: {
            n.expect_keys({"outliers", "strongest", "maxZ", "median", "mad", "series"});
            return OutlierPayload{read_strings(n["outliers"]), n["strongest"].text(), n["maxZ"].real(),
                                  n["median"].real(),          n["mad"].real(),        read_series(n["series"])};
        }
        case InsightType::Trend: {
            n.expect_keys({"slope", "intercept", "r", "pValue", "increasing", "series"});
            return TrendPayload{n["slope"].real(),   n["intercept"].real(),  n["r"].real(),
                                n["pValue"].real(),  n["increasing"].flag(), read_series(n["series"])};
        }
        case InsightType::Correlation: {
            n.expect_keys({"r", "otherSubspace", "seriesA", "seriesB"});
            return CorrelationPayload{n["r"].real(), read_subspace(n["otherSubspace"]), read_series(n["seriesA"]),
                                      read_series(n["seriesB"])};
        }
        case InsightType::CrossMeasureCorrelation: {
            n.expect_keys({"r", "measureA", "measureB", "seriesA", "seriesB"});
            return CrossMeasurePayload{n["r"].real(), n["measureA"].text(), n["measureB"].text(),
                                       read_series(n["seriesA"]), read_series(n["seriesB"])};
        }
        case InsightType::Clustering: {
            n.expect_keys({"gap", "meanOtherGaps", "low", "high", "series"});
            return ClusteringPayload{n["gap"].real(), n["meanOtherGaps"].real(), read_strings(n["low"]),
                                     read_strings(n["high"]), read_series(n["series"])};
        }
    }
    n.fail("unknown insight type");
}

Json optional_real(const std::optional<double>& value) { return value ? real(*value) : Json(nullptr); }

Json point_json(const Point2& p) { return Json::array({real(p.x), real(p.y)}); }

Point2 read_point(const Node& node) {
    const auto items = node.items();
    if (items.size() != 2) node.fail("expected [x, y]");
    return {items[0].real(), items[1].real()};
}

std::pair<int, int> parse_version(const Node& node) {
    const auto text = node.text();
    const auto dot = text.find('.');
    int major = 0;
    int minor = 0;
    const char* end = text.data() + text.size();
    if (dot == std::string::npos) node.fail("expected \"major.minor\"");
    const auto a = std::from_chars(text.data(), text.data() + dot, major);
    const auto b = std::from_chars(text.data() + dot + 1, end, minor);
    if (a.ec != std::errc{} || a.ptr != text.data() + dot || b.ec != std::errc{} || b.ptr != end || dot == 0) {
        node.fail("expected \"major.minor\"");
    }
    return {major, minor};
}

}  // namespace

// ---------------------------------------------------------------------------
// Writing

Json real(double value) {
    if (std::isnan(value)) return "NaN";
    if (std::isinf(value)) return value > 0 ? "Infinity" : "-Infinity";
    return value + 0.0;
}

Json to_json(const FieldSchema& field) {
    return {{"name", field.name},
            {"role", to_string(field.role)},
            {"kind", to_string(field.kind)},
            {"domain", field.domain},
            {"min", real(field.min)},
            {"max", real(field.max)}};
}

Json to_json(const FieldDistribution& distribution) {
    Json bins = Json::array();
    for (const auto& bin : distribution.bins) {
        bins.push_back(
            {{"label", bin.label}, {"lower", real(bin.lower)}, {"upper", real(bin.upper)}, {"count", bin.count}});
    }
    return {{"field", distribution.field}, {"kind", to_string(distribution.kind)}, {"bins", std::move(bins)}};
}

Json to_json(const DatasetSummary& dataset) {
    Json fields = Json::array();
    for (const auto& f : dataset.fields) fields.push_back(to_json(f));
    Json distributions = Json::array();
    for (const auto& d : dataset.distributions) distributions.push_back(to_json(d));
    return {{"name", dataset.name},
            {"rowCount", dataset.row_count},
            {"fields", std::move(fields)},
            {"distributions", std::move(distributions)}};
}

Json to_json(const SubspaceSpec& subspace) {
    Json out = Json::array();
    for (const auto& f : subspace) out.push_back({{"field", f.field}, {"value", f.value}});
    return out;
}

Json to_json(const Insight& insight) {
    return {{"id", insight.id},
            {"type", to_string(insight.type)},
            {"subspace", to_json(insight.subspace)},
            {"breakdown", insight.breakdown},
            {"measure", insight.measure},
            {"secondMeasure", insight.second_measure},
            {"aggregation", to_string(insight.agg)},
            {"significance", real(insight.significance)},
            {"impact", real(insight.impact)},
            {"score", real(insight.score)},
            {"breakdownValue", insight.breakdown_value ? Json(*insight.breakdown_value) : Json(nullptr)},
            {"payload", payload_json(insight.payload)}};
}

Json to_json(const SubspaceEntry& entry) {
    return {{"filters", to_json(entry.filters)}, {"rowCount", entry.row_count}, {"insightCount", entry.insight_count}};
}

Json to_json(const Projection& projection) {
    Json points = Json::array();
    for (const auto& p : projection.points) {
        points.push_back({{"insightId", p.insight_id}, {"x", real(p.x)}, {"y", real(p.y)}});
    }
    return {{"method", to_string(projection.method)},
            {"embedding", to_string(projection.embedding)},
            {"seed", projection.seed},
            {"perplexity", real(projection.perplexity)},
            {"iterations", projection.iterations},
            {"points", std::move(points)}};
}

Json to_json(const DensityField& density) {
    Json grid = Json::array();
    for (double v : density.grid) grid.push_back(real(v));
    Json contours = Json::array();
    for (const auto& level : density.contours) {
        Json lines = Json::array();
        for (const auto& line : level.lines) {
            Json points = Json::array();
            for (const auto& p : line.points) points.push_back(point_json(p));
            lines.push_back({{"closed", line.closed}, {"points", std::move(points)}});
        }
        contours.push_back(
            {{"fraction", real(level.fraction)}, {"isoValue", real(level.iso_value)}, {"lines", std::move(lines)}});
    }
    const auto& b = density.bounds;
    return {{"width", density.width},
            {"height", density.height},
            {"bounds", {{"xmin", real(b.xmin)}, {"xmax", real(b.xmax)}, {"ymin", real(b.ymin)}, {"ymax", real(b.ymax)}}},
            {"bandwidth", real(density.bandwidth)},
            {"grid", std::move(grid)},
            {"contours", std::move(contours)}};
}

Json to_json(const MiningConfig& config) {
    Json aggregations = Json::array();
    for (auto a : config.aggregations) aggregations.push_back(to_string(a));
    Json levels = Json::array();
    for (double l : config.contour_levels) levels.push_back(real(l));
    const auto& d = config.detectors;
    return {
        {"maxDepth", config.max_depth},
        {"minRows", config.min_rows},
        {"effectiveMinRows", config.effective_min_rows},
        {"aggregations", std::move(aggregations)},
        {"detectors",
         {{"topOneMinZ", real(d.top_one_min_z)},
          {"attributionMinShare", real(d.attribution_min_share)},
          {"changePointMaxP", real(d.change_point_max_p)},
          {"outlierMinZ", real(d.outlier_min_z)},
          {"trendMinAbsR", real(d.trend_min_abs_r)},
          {"trendMaxP", real(d.trend_max_p)},
          {"correlationMinAbsR", real(d.correlation_min_abs_r)},
          {"clusteringMinGapRatio", real(d.clustering_min_gap_ratio)},
          {"topOneMinLength", d.top_one_min_length},
          {"attributionMinLength", d.attribution_min_length},
          {"changePointMinLength", d.change_point_min_length},
          {"outlierMinLength", d.outlier_min_length},
          {"trendMinLength", d.trend_min_length},
          {"correlationMinLength", d.correlation_min_length},
          {"clusteringMinLength", d.clustering_min_length}}},
        {"impact", to_string(config.impact)},
        {"keepThreshold", real(config.keep_threshold)},
        {"projection", to_string(config.projection)},
        {"embedding", to_string(config.embedding)},
        {"attributeEmbedding",
         {{"normalizeByRows", config.attribute.normalize_by_rows}, {"measureBins", config.attribute.measure_bins}}},
        {"perplexity", real(config.perplexity)},
        {"seed", config.seed},
        {"tsneIterations", config.tsne_iterations},
        {"mapLimit", config.map_limit},
        {"gridWidth", config.grid_width},
        {"gridHeight", config.grid_height},
        {"bandwidth", optional_real(config.bandwidth)},
        {"contourLevels", std::move(levels)},
        {"distributionBins", config.distribution_bins},
    };
}

Json to_json(const Catalog& catalog) {
    Json insights = Json::array();
    for (const auto& i : catalog.insights) insights.push_back(to_json(i));
    Json subspaces = Json::array();
    for (const auto& s : catalog.subspaces) subspaces.push_back(to_json(s));
    return {{"schemaVersion", catalog.schema_version},
            {"dataset", to_json(catalog.dataset)},
            {"insights", std::move(insights)},
            {"subspaces", std::move(subspaces)},
            {"projection", catalog.projection ? to_json(*catalog.projection) : Json(nullptr)},
            {"density", catalog.density ? to_json(*catalog.density) : Json(nullptr)},
            {"config", to_json(catalog.config)}};
}

std::string dump(const Json& value) { return value.dump(-1, ' ', false, Json::error_handler_t::replace); }

// ---------------------------------------------------------------------------
// Reading

void Node::fail(std::string_view what) const {
    const std::string where = pointer_.empty() ? "document root" : pointer_;
    throw CatalogError(CatalogErrc::MalformedCatalog, "malformed catalog at " + where + ": " + std::string(what),
                       pointer_);
}

void Node::require_object() const {
    if (!value_->is_object()) fail("expected an object");
}

Node Node::operator[](std::string_view key) const {
    auto child = find(key);
    if (!child) {
        const std::string at = pointer_ + "/" + escape_token(key);
        throw CatalogError(CatalogErrc::MalformedCatalog, "malformed catalog at " + at + ": missing key", at);
    }
    return *child;
}

std::optional<Node> Node::find(std::string_view key) const {
    require_object();
    const auto it = value_->find(key);
    if (it == value_->end()) return std::nullopt;
    return Node(*it, pointer_ + "/" + escape_token(key), strict_);
}

void Node::expect_keys(std::initializer_list<std::string_view> allowed) const {
    require_object();
    if (!strict_) return;
    for (const auto& [key, value] : value_->items()) {
        bool known = false;
        for (auto a : allowed) known = known || a == key;
        if (!known) Node(value, pointer_ + "/" + escape_token(key), strict_).fail("unknown key");
    }
}

std::vector<Node> Node::items() const {
    if (!value_->is_array()) fail("expected an array");
    std::vector<Node> out;
    out.reserve(value_->size());
    for (std::size_t i = 0; i < value_->size(); ++i) {
        out.emplace_back((*value_)[i], pointer_ + "/" + std::to_string(i), strict_);
    }
    return out;
}

double Node::real() const {
    if (value_->is_number()) return value_->get<double>();
    if (value_->is_string()) {
        const auto& s = value_->get_ref<const std::string&>();
        if (s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
        if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    }
    fail("expected a number");
}

std::string Node::text() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
}

std::size_t Node::count() const {
    if (!value_->is_number_unsigned()) fail("expected a non-negative integer");
    return value_->get<std::size_t>();
}

std::uint64_t Node::u64() const {
    if (!value_->is_number_unsigned()) fail("expected a non-negative integer");
    return value_->get<std::uint64_t>();
}

bool Node::flag() const {
    if (!value_->is_boolean()) fail("expected a boolean");
    return value_->get<bool>();
}

FieldSchema read_field(const Node& n) {
    n.expect_keys({"name", "role", "kind", "domain", "min", "max"});
    FieldSchema f;
    f.name = n["name"].text();
    f.role = read_enum(n["role"], parse_field_role);
    f.kind = read_enum(n["kind"], parse_value_kind);
    f.domain = read_strings(n["domain"]);
    f.min = n["min"].real();
    f.max = n["max"].real();
    return f;
}

FieldDistribution read_distribution(const Node& n) {
    n.expect_keys({"field", "kind", "bins"});
    FieldDistribution d;
    d.field = n["field"].text();
    d.kind = read_enum(n["kind"], parse_distribution_kind);
    for (const auto& b : n["bins"].items()) {
        b.expect_keys({"label", "lower", "upper", "count"});
        d.bins.push_back({b["label"].text(), b["lower"].real(), b["upper"].real(), b["count"].count()});
    }
    return d;
}

DatasetSummary read_dataset(const Node& n) {
    n.expect_keys({"name", "rowCount", "fields", "distributions"});
    DatasetSummary d;
    d.name = n["name"].text();
    d.row_count = n["rowCount"].count();
    for (const auto& f : n["fields"].items()) d.fields.push_back(read_field(f));
    for (const auto& f : n["distributions"].items()) d.distributions.push_back(read_distribution(f));
    return d;
}

SubspaceSpec read_subspace(const Node& n) {
    SubspaceSpec out;
    for (const auto& f : n.items()) {
        f.expect_keys({"field", "value"});
        out.push_back({f["field"].text(), f["value"].text()});
    }
    return out;
}

Insight read_insight(const Node& n) {
    n.expect_keys({"id", "type", "subspace", "breakdown", "measure", "secondMeasure", "aggregation", "significance",
                   "impact", "score", "breakdownValue", "payload"});
    Insight i;
    i.id = n["id"].text();
    i.type = read_enum(n["type"], parse_insight_type);
    i.subspace = read_subspace(n["subspace"]);
    i.breakdown = n["breakdown"].text();
    i.measure = n["measure"].text();
    i.second_measure = n["secondMeasure"].text();
    i.agg = read_enum(n["aggregation"], parse_aggregation);
    i.significance = n["significance"].real();
    i.impact = n["impact"].real();
    i.score = n["score"].real();
    const auto bv = n["breakdownValue"];
    if (!bv.is_null()) i.breakdown_value = bv.text();
    i.payload = read_payload(i.type, n["payload"]);
    return i;
}

SubspaceEntry read_subspace_entry(const Node& n) {
    n.expect_keys({"filters", "rowCount", "insightCount"});
    return {read_subspace(n["filters"]), n["rowCount"].count(), n["insightCount"].count()};
}

Projection read_projection(const Node& n) {
    n.expect_keys({"method", "embedding", "seed", "perplexity", "iterations", "points"});
    Projection p;
    p.method = read_enum(n["method"], parse_projection_method);
    p.embedding = read_enum(n["embedding"], parse_embedding_kind);
    p.seed = n["seed"].u64();
    p.perplexity = n["perplexity"].real();
    p.iterations = n["iterations"].count();
    for (const auto& item : n["points"].items()) {
        item.expect_keys({"insightId", "x", "y"});
        p.points.push_back({item["insightId"].text(), item["x"].real(), item["y"].real()});
    }
    return p;
}

DensityField read_density(const Node& n) {
    n.expect_keys({"width", "height", "bounds", "bandwidth", "grid", "contours"});
    DensityField d;
    d.width = n["width"].count();
    d.height = n["height"].count();
    const auto b = n["bounds"];
    b.expect_keys({"xmin", "xmax", "ymin", "ymax"});
    d.bounds = {b["xmin"].real(), b["xmax"].real(), b["ymin"].real(), b["ymax"].real()};
    d.bandwidth = n["bandwidth"].real();
    const auto grid = n["grid"];
    for (const auto& v : grid.items()) d.grid.push_back(v.real());
    if (d.grid.size() != d.width * d.height) grid.fail("grid size does not match width * height");
    for (const auto& level : n["contours"].items()) {
        level.expect_keys({"fraction", "isoValue", "lines"});
        ContourLevel c;
        c.fraction = level["fraction"].real();
        c.iso_value = level["isoValue"].real();
        for (const auto& line : level["lines"].items()) {
            line.expect_keys({"closed", "points"});
            Polyline poly;
            poly.closed = line["closed"].flag();
            for (const auto& p : line["points"].items()) poly.points.push_back(read_point(p));
            c.lines.push_back(std::move(poly));
        }
        d.contours.push_back(std::move(c));
    }
    return d;
}

MiningConfig read_config(const Node& n) {
    n.expect_keys({"maxDepth", "minRows", "effectiveMinRows", "aggregations", "detectors", "impact",
                   "keepThreshold", "projection", "embedding", "attributeEmbedding", "perplexity", "seed",
                   "tsneIterations", "mapLimit", "gridWidth", "gridHeight", "bandwidth", "contourLevels",
                   "distributionBins"});
    MiningConfig c;
    auto set_count = [&](const Node& node, std::string_view key, std::size_t& out) {
        if (auto v = node.find(key)) out = v->count();
    };
    auto set_real = [&](const Node& node, std::string_view key, double& out) {
        if (auto v = node.find(key)) out = v->real();
    };
    set_count(n, "maxDepth", c.max_depth);
    set_count(n, "minRows", c.min_rows);
    set_count(n, "effectiveMinRows", c.effective_min_rows);
    if (auto v = n.find("aggregations")) {
        c.aggregations.clear();
        for (const auto& a : v->items()) c.aggregations.push_back(read_enum(a, parse_aggregation));
    }
    if (auto v = n.find("detectors")) {
        auto& d = c.detectors;
        v->expect_keys({"topOneMinZ", "attributionMinShare", "changePointMaxP", "outlierMinZ", "trendMinAbsR",
                        "trendMaxP", "correlationMinAbsR", "clusteringMinGapRatio", "topOneMinLength",
                        "attributionMinLength", "changePointMinLength", "outlierMinLength", "trendMinLength",
                        "correlationMinLength", "clusteringMinLength"});
        set_real(*v, "topOneMinZ", d.top_one_min_z);
        set_real(*v, "attributionMinShare", d.attribution_min_share);
        set_real(*v, "changePointMaxP", d.change_point_max_p);
        set_real(*v, "outlierMinZ", d.outlier_min_z);
        set_real(*v, "trendMinAbsR", d.trend_min_abs_r);
        set_real(*v, "trendMaxP", d.trend_max_p);
        set_real(*v, "correlationMinAbsR", d.correlation_min_abs_r);
        set_real(*v, "clusteringMinGapRatio", d.clustering_min_gap_ratio);
        set_count(*v, "topOneMinLength", d.top_one_min_length);
        set_count(*v, "attributionMinLength", d.attribution_min_length);
        set_count(*v, "changePointMinLength", d.change_point_min_length);
        set_count(*v, "outlierMinLength", d.outlier_min_length);
        set_count(*v, "trendMinLength", d.trend_min_length);
        set_count(*v, "correlationMinLength", d.correlation_min_length);
        set_count(*v, "clusteringMinLength", d.clustering_min_length);
    }
    if (auto v = n.find("impact")) c.impact = read_enum(*v, parse_impact_mode);
    set_real(n, "keepThreshold", c.keep_threshold);
    if (auto v = n.find("projection")) c.projection = read_enum(*v, parse_projection_method);
    if (auto v = n.find("embedding")) c.embedding = read_enum(*v, parse_embedding_kind);
    if (auto v = n.find("attributeEmbedding")) {
        v->expect_keys({"normalizeByRows", "measureBins"});
        if (auto f = v->find("normalizeByRows")) c.attribute.normalize_by_rows = f->flag();
        set_count(*v, "measureBins", c.attribute.measure_bins);
    }
    set_real(n, "perplexity", c.perplexity);
    if (auto v = n.find("seed")) c.seed = v->u64();
    set_count(n, "tsneIterations", c.tsne_iterations);
    set_count(n, "mapLimit", c.map_limit);
    set_count(n, "gridWidth", c.grid_width);
    set_count(n, "gridHeight", c.grid_height);
    if (auto v = n.find("bandwidth"); v && !v->is_null()) c.bandwidth = v->real();
    if (auto v = n.find("contourLevels")) {
        c.contour_levels.clear();
        for (const auto& l : v->items()) c.contour_levels.push_back(l.real());
    }
    set_count(n, "distributionBins", c.distribution_bins);
    return c;
}

}  // namespace insightmap::json_codec

namespace insightmap {

std::string serialize_catalog(const Catalog& catalog) { return json_codec::dump(json_codec::to_json(catalog)); }

Catalog deserialize_catalog(std::string_view bytes) {
    using json_codec::Json;
    using json_codec::Node;
    Json document;
    try {
        document = Json::parse(bytes.begin(), bytes.end());
    } catch (const Json::parse_error& e) {
        throw CatalogError(CatalogErrc::MalformedCatalog, std::string("malformed catalog: ") + e.what(), "");
    }

    const Node probe(document, "", true);
    const auto version_node = probe["schemaVersion"];
    const auto [major, minor] = json_codec::parse_version(version_node);
    const auto [reader_major, reader_minor] = json_codec::parse_version(Node(Json(std::string(kSchemaVersion)), "", true));
    if (major != reader_major) {
        throw CatalogError(CatalogErrc::SchemaVersionMismatch,
                           "catalog schema version " + version_node.text() + " is not readable by version " +
                               std::string(kSchemaVersion),
                           "/schemaVersion");
    }
    const Node root(document, "", minor <= reader_minor);
    root.expect_keys({"schemaVersion", "dataset", "insights", "subspaces", "projection", "density", "config"});

    Catalog catalog;
    catalog.schema_version = version_node.text();
    catalog.dataset = json_codec::read_dataset(root["dataset"]);
    for (const auto& i : root["insights"].items()) catalog.insights.push_back(json_codec::read_insight(i));
    for (const auto& s : root["subspaces"].items()) catalog.subspaces.push_back(json_codec::read_subspace_entry(s));
    if (const auto p = root["projection"]; !p.is_null()) catalog.projection = json_codec::read_projection(p);
    if (const auto d = root["density"]; !d.is_null()) catalog.density = json_codec::read_density(d);
    catalog.config = json_codec::read_config(root["config"]);
    return catalog;
}

}  // namespace insightmap

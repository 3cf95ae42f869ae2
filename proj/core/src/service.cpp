#include "insightmap/service.hpp"

#include <sys/socket.h>

#include <charconv>
#include <condition_variable>
#include <fstream>
#include <list>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "insightmap/catalog.hpp"
#include "insightmap/catalog_json.hpp"
#include "json_codec.hpp"

// After Eigen: <resolv.h> defines a _res macro that breaks Eigen's headers.
#include <httplib.h>

namespace insightmap {

namespace {

using json_codec::Json;
namespace fs = std::filesystem;

/// Thrown inside handlers; turned into the {code, message, detail} body.
struct ApiError {
    int status;
    std::string code;
    std::string message;
    Json detail = Json::object();
};

std::string_view ingest_code(IngestErrc code) {
    switch (code) {
        case IngestErrc::EmptyInput: return "empty_input";
        case IngestErrc::RaggedRow: return "ragged_row";
        case IngestErrc::UnknownOverrideField: return "unknown_override_field";
        case IngestErrc::AllMissing: return "all_missing";
        case IngestErrc::NonNumericMeasure: return "non_numeric_measure";
        case IngestErrc::DuplicateField: return "duplicate_field";
        case IngestErrc::MalformedCsv: return "malformed_csv";
    }
    return "ingest_error";
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Writes via a temporary file so readers never see a partial file.
void write_file(const fs::path& path, std::string_view bytes) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw ServiceError("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

bool valid_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z');
        if (!ok) return false;
    }
    return true;
}

double parse_real_param(const std::string& key, const std::string& text) {
    const auto value = parse_number(text);
    if (!value) throw ApiError{400, "invalid_query", "parameter " + key + " is not a number", {{"parameter", key}}};
    return *value;
}

std::size_t parse_count_param(const std::string& key, const std::string& text) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ApiError{400, "invalid_query", "parameter " + key + " is not a non-negative integer",
                       {{"parameter", key}}};
    }
    return value;
}

std::vector<std::string> split(std::string_view text, char separator) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto end = text.find(separator, start);
        out.emplace_back(text.substr(start, end == std::string_view::npos ? text.npos : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

InsightQuery parse_insight_query(const httplib::Params& params, const Catalog& catalog) {
    InsightQuery q;
    for (const auto& [key, value] : params) {
        if (key == "types") {
            if (!q.types) q.types.emplace();
            for (const auto& name : split(value, ',')) {
                if (name.empty()) continue;
                const auto type = parse_insight_type(name);
                if (!type) throw ApiError{400, "unknown_type", "unknown insight type '" + name + "'", {{"type", name}}};
                q.types->insert(*type);
            }
        } else if (key == "minScore") {
            q.min_score = parse_real_param(key, value);
        } else if (key == "minSignificance") {
            q.min_significance = parse_real_param(key, value);
        } else if (key == "minImpact") {
            q.min_impact = parse_real_param(key, value);
        } else if (key == "breakdownValue") {
            q.breakdown_value = value;
        } else if (key == "limit") {
            q.limit = parse_count_param(key, value);
        } else if (key == "offset") {
            q.offset = parse_count_param(key, value);
        } else if (key == "brush") {
            const auto colon = value.find(':');
            if (colon == std::string::npos || colon == 0) {
                throw ApiError{400, "invalid_query", "brush must look like field:v1|v2", {{"brush", value}}};
            }
            const std::string field = value.substr(0, colon);
            auto& accepted = q.brush[field];
            for (auto& v : split(std::string_view(value).substr(colon + 1), '|')) accepted.insert(std::move(v));
        } else {
            throw ApiError{400, "invalid_query", "unknown parameter '" + key + "'", {{"parameter", key}}};
        }
    }
    for (const auto& [field, values] : q.brush) {
        const auto it = std::find_if(catalog.dataset.fields.begin(), catalog.dataset.fields.end(),
                                     [&](const FieldSchema& f) { return f.name == field; });
        if (it == catalog.dataset.fields.end() || !it->is_dimension()) {
            throw ApiError{400, "unknown_field", "brush names unknown dimension '" + field + "'", {{"field", field}}};
        }
    }
    return q;
}

Json insight_json(const Insight& insight) {
    Json j = json_codec::to_json(insight);
    j["description"] = describe_insight(insight);
    return j;
}

Json overrides_json(const TypingOverrides& overrides) {
    Json j = Json::object();
    for (const auto& [field, role] : overrides) j[field] = to_string(role);
    return j;
}

TypingOverrides parse_overrides(std::string_view text) {
    TypingOverrides out;
    if (text.empty()) return out;
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error&) {
        throw ApiError{400, "invalid_overrides", "overrides must be a JSON object of field -> role"};
    }
    if (!j.is_object()) throw ApiError{400, "invalid_overrides", "overrides must be a JSON object of field -> role"};
    for (const auto& [field, role] : j.items()) {
        const auto parsed = role.is_string() ? parse_field_role(role.get<std::string>()) : std::nullopt;
        if (!parsed) {
            throw ApiError{400, "invalid_overrides", "role for '" + field + "' must be dimension or measure",
                           {{"field", field}}};
        }
        out.emplace(field, *parsed);
    }
    return out;
}

}  // namespace

struct Service::Impl {
    ServiceConfig config;
    httplib::Server server;
    int bound_port = -1;
    bool run_started = false;
    bool stop_requested = false;

    enum class JobState { queued, running, done, failed };
    struct Job {
        std::string id;
        std::string dataset_id;
        JobState state = JobState::queued;
        double progress = 0.0;
        std::optional<std::string> error;
        std::optional<std::string> catalog_id;
    };

    std::mutex mutex;
    std::condition_variable jobs_changed;
    std::map<std::string, Job> jobs;
    std::map<std::string, std::string> active_job_by_dataset;
    std::size_t job_counter = 0;
    std::list<std::jthread> workers;
    std::map<std::string, std::shared_ptr<const Dataset>> datasets;
    std::map<std::string, std::shared_ptr<const Catalog>> catalogs;

    explicit Impl(ServiceConfig c) : config(std::move(c)) {}

    fs::path dataset_dir() const { return config.data_dir / "datasets"; }
    fs::path catalog_dir() const { return config.data_dir / "catalogs"; }

    // ---- storage -----------------------------------------------------------

    std::shared_ptr<const Dataset> load_dataset(const std::string& id) {
        {
            std::lock_guard lock(mutex);
            if (auto it = datasets.find(id); it != datasets.end()) return it->second;
        }
        const fs::path dir = dataset_dir() / id;
        if (!valid_id(id) || !fs::exists(dir / "source.csv")) {
            throw ApiError{404, "dataset_not_found", "no dataset '" + id + "'", {{"datasetId", id}}};
        }
        const auto meta = Json::parse(read_file(dir / "meta.json"));
        const auto overrides = parse_overrides(meta.at("overrides").dump());
        auto dataset =
            std::make_shared<const Dataset>(ingest_csv(read_file(dir / "source.csv"), overrides, meta.at("name").get<std::string>()));
        std::lock_guard lock(mutex);
        return datasets.try_emplace(id, std::move(dataset)).first->second;
    }

    std::shared_ptr<const Catalog> load_catalog(const std::string& id) {
        {
            std::lock_guard lock(mutex);
            if (auto it = catalogs.find(id); it != catalogs.end()) return it->second;
        }
        const fs::path path = catalog_dir() / (id + ".json");
        if (!valid_id(id) || !fs::exists(path)) {
            throw ApiError{404, "catalog_not_found", "no catalog '" + id + "'", {{"catalogId", id}}};
        }
        auto catalog = std::make_shared<const Catalog>(deserialize_catalog(read_file(path)));
        std::lock_guard lock(mutex);
        return catalogs.try_emplace(id, std::move(catalog)).first->second;
    }

    // ---- handlers ----------------------------------------------------------

    Json post_dataset(const httplib::Request& req) {
        std::string csv;
        std::string name = "dataset";
        TypingOverrides overrides;
        if (req.is_multipart_form_data()) {
            if (req.has_file("file")) {
                const auto file = req.get_file_value("file");
                csv = file.content;
                if (!file.filename.empty()) name = fs::path(file.filename).stem().string();
            } else if (!req.files.empty()) {
                csv = req.files.begin()->second.content;
            } else {
                throw ApiError{400, "missing_file", "multipart body has no CSV part"};
            }
            if (req.has_file("overrides")) overrides = parse_overrides(req.get_file_value("overrides").content);
            if (req.has_file("name")) name = req.get_file_value("name").content;
        } else {
            csv = req.body;
            if (req.has_param("overrides")) overrides = parse_overrides(req.get_param_value("overrides"));
        }
        if (req.has_param("name")) name = req.get_param_value("name");

        Dataset dataset = [&] {
            try {
                return ingest_csv(csv, overrides, name);
            } catch (const IngestError& e) {
                Json detail = {{"reason", ingest_code(e.code())}};
                detail["row"] = e.row() ? Json(*e.row()) : Json(nullptr);
                throw ApiError{422, "ingest_error", e.what(), std::move(detail)};
            }
        }();

        const Json meta = {{"name", name}, {"overrides", overrides_json(overrides)}};
        const std::string id = "d" + to_hex(fnv1a64(json_codec::dump(meta) + '\n' + csv));
        const fs::path dir = dataset_dir() / id;
        fs::create_directories(dir);
        write_file(dir / "source.csv", csv);
        write_file(dir / "meta.json", json_codec::dump(meta));
        const std::size_t rows = dataset.row_count();
        {
            std::lock_guard lock(mutex);
            datasets.try_emplace(id, std::make_shared<const Dataset>(std::move(dataset)));
        }
        return {{"datasetId", id}, {"name", name}, {"rowCount", rows}};
    }

    Json schema(const std::string& id) {
        const auto dataset = load_dataset(id);
        Json fields = Json::array();
        for (const auto& f : dataset->fields()) {
            Json j = json_codec::to_json(f);
            j["missing"] = dataset->missing_count(*dataset->field_index(f.name));
            fields.push_back(std::move(j));
        }
        return {{"datasetId", id}, {"name", dataset->name()}, {"rowCount", dataset->row_count()}, {"fields", fields}};
    }

    Json distribution(const std::string& id, const std::string& field, const httplib::Request& req) {
        const auto dataset = load_dataset(id);
        const auto index = dataset->field_index(field);
        if (!index) throw ApiError{404, "field_not_found", "no field '" + field + "'", {{"field", field}}};
        std::size_t bins = 10;
        if (req.has_param("bins")) bins = parse_count_param("bins", req.get_param_value("bins"));
        if (bins == 0) throw ApiError{400, "invalid_query", "bins must be positive", {{"parameter", "bins"}}};
        return json_codec::to_json(field_distribution(*dataset, *index, bins));
    }

    Json post_mine(const std::string& dataset_id, const httplib::Request& req) {
        auto dataset = load_dataset(dataset_id);
        MiningConfig config;
        if (!req.body.empty()) {
            Json body;
            try {
                body = Json::parse(req.body);
            } catch (const Json::parse_error&) {
                throw ApiError{400, "invalid_config", "mining config is not valid JSON"};
            }
            try {
                config = json_codec::read_config(json_codec::Node(body, "", true));
            } catch (const CatalogError& e) {
                throw ApiError{400, "invalid_config", e.what(), {{"pointer", e.pointer()}}};
            }
        }

        std::lock_guard lock(mutex);
        if (auto it = active_job_by_dataset.find(dataset_id); it != active_job_by_dataset.end()) {
            throw ApiError{409, "job_conflict", "a mining job is already running for this dataset",
                           {{"jobId", it->second}}};
        }
        const std::string job_id = "j" + std::to_string(++job_counter);
        jobs[job_id] = Job{job_id, dataset_id, JobState::queued, 0.0, std::nullopt, std::nullopt};
        active_job_by_dataset[dataset_id] = job_id;
        workers.emplace_back([this, job_id, dataset_id, dataset, config] { run_job(job_id, dataset_id, *dataset, config); });
        return {{"jobId", job_id}};
    }

    void run_job(const std::string& job_id, const std::string& dataset_id, const Dataset& dataset,
                 const MiningConfig& config) {
        {
            std::lock_guard lock(mutex);
            jobs[job_id].state = JobState::running;
        }
        std::optional<std::string> error;
        std::string catalog_id;
        try {
            const Catalog catalog = build_catalog(dataset, config, [&](double p) {
                std::lock_guard lock(mutex);
                jobs[job_id].progress = std::min(p, 0.99);
            });
            const std::string bytes = serialize_catalog(catalog);
            catalog_id = "c" + to_hex(fnv1a64(bytes));
            fs::create_directories(catalog_dir());
            write_file(catalog_dir() / (catalog_id + ".json"), bytes);
            std::lock_guard lock(mutex);
            catalogs.try_emplace(catalog_id, std::make_shared<const Catalog>(catalog));
        } catch (const std::exception& e) {
            error = e.what();
        }
        std::lock_guard lock(mutex);
        auto& job = jobs[job_id];
        if (error) {
            job.state = JobState::failed;
            job.error = error;
        } else {
            job.state = JobState::done;
            job.progress = 1.0;
            job.catalog_id = catalog_id;
        }
        active_job_by_dataset.erase(dataset_id);
        jobs_changed.notify_all();
    }

    Json job(const std::string& id) {
        std::lock_guard lock(mutex);
        const auto it = jobs.find(id);
        if (it == jobs.end()) throw ApiError{404, "job_not_found", "no job '" + id + "'", {{"jobId", id}}};
        const Job& j = it->second;
        static constexpr const char* kStates[] = {"queued", "running", "done", "failed"};
        Json out = {{"id", j.id},
                    {"datasetId", j.dataset_id},
                    {"state", kStates[static_cast<int>(j.state)]},
                    {"progress", j.progress}};
        out["error"] = j.error ? Json(*j.error) : Json(nullptr);
        out["resultCatalogId"] = j.catalog_id ? Json(*j.catalog_id) : Json(nullptr);
        return out;
    }

    Json insights(const std::string& id, const httplib::Request& req) {
        const auto catalog = load_catalog(id);
        const auto query = parse_insight_query(req.params, *catalog);
        const auto result = query_insights(*catalog, query);
        Json list = Json::array();
        for (const auto& insight : result.insights) list.push_back(insight_json(insight));
        return {{"total", result.total}, {"offset", query.offset}, {"insights", std::move(list)}};
    }

    const Insight& find_insight(const Catalog& catalog, const std::string& iid) {
        const Insight* insight = catalog.find(iid);
        if (!insight) throw ApiError{404, "insight_not_found", "no insight '" + iid + "'", {{"insightId", iid}}};
        return *insight;
    }

    Json related(const std::string& id, const std::string& iid, const httplib::Request& req) {
        const auto catalog = load_catalog(id);
        find_insight(*catalog, iid);
        Relation relation;
        const std::string kind = req.has_param("relation") ? req.get_param_value("relation") : "sameBreakdownValue";
        if (kind == "nearestK") {
            relation.kind = Relation::Kind::nearest;
        } else if (kind != "sameBreakdownValue") {
            throw ApiError{400, "invalid_query", "relation must be sameBreakdownValue or nearestK",
                           {{"parameter", "relation"}}};
        }
        if (req.has_param("k")) relation.k = parse_count_param("k", req.get_param_value("k"));
        try {
            return {{"insightId", iid}, {"relation", kind}, {"related", related_insights(*catalog, iid, relation)}};
        } catch (const CatalogError& e) {
            throw ApiError{404, "projection_not_found", e.what(), {{"insightId", iid}}};
        }
    }

    Json subspaces(const std::string& id, const httplib::Request& req) {
        const auto catalog = load_catalog(id);
        std::vector<SubspaceEntry> list = catalog->subspaces;
        const std::string sort = req.has_param("sort") ? req.get_param_value("sort") : "insightCount";
        if (sort == "rowCount") {
            std::stable_sort(list.begin(), list.end(),
                             [](const auto& a, const auto& b) { return a.row_count > b.row_count; });
        } else if (sort != "insightCount") {
            throw ApiError{400, "invalid_query", "sort must be insightCount or rowCount", {{"parameter", "sort"}}};
        }
        Json out = Json::array();
        for (const auto& s : list) out.push_back(json_codec::to_json(s));
        return {{"subspaces", std::move(out)}};
    }

    // ---- wiring ------------------------------------------------------------

    static void send(httplib::Response& res, int status, const Json& body) {
        res.status = status;
        res.set_content(json_codec::dump(body), "application/json");
    }

    using JsonHandler = std::function<Json(const httplib::Request&)>;

    httplib::Server::Handler wrap(JsonHandler handler, int status = 200) {
        return [handler = std::move(handler), status](const httplib::Request& req, httplib::Response& res) {
            try {
                send(res, status, handler(req));
            } catch (const ApiError& e) {
                send(res, e.status, {{"code", e.code}, {"message", e.message}, {"detail", e.detail}});
            } catch (const CatalogError& e) {
                send(res, 500, {{"code", "catalog_unreadable"}, {"message", e.what()}, {"detail", {{"pointer", e.pointer()}}}});
            } catch (const std::exception& e) {
                send(res, 500, {{"code", "internal_error"}, {"message", e.what()}, {"detail", Json::object()}});
            }
        };
    }

    void routes() {
        if (!config.cors_origin.empty()) {
            server.set_default_headers({{"Access-Control-Allow-Origin", config.cors_origin},
                                        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                        {"Access-Control-Allow-Headers", "Content-Type"}});
            server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        }
        // One bind at a time: a busy port must fail rather than be shared.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
        });

        const std::string p = "/api/v1";
        server.Get(p + "/health", wrap([](const auto&) { return Json{{"status", "ok"}}; }));
        server.Post(p + "/datasets", wrap([this](const auto& req) { return post_dataset(req); }, 201));
        server.Get(p + R"(/datasets/([^/]+)/schema)", wrap([this](const auto& req) { return schema(req.matches[1]); }));
        server.Get(p + R"(/datasets/([^/]+)/fields/([^/]+)/distribution)",
                   wrap([this](const auto& req) { return distribution(req.matches[1], req.matches[2], req); }));
        server.Post(p + R"(/datasets/([^/]+)/mine)",
                    wrap([this](const auto& req) { return post_mine(req.matches[1], req); }, 202));
        server.Get(p + R"(/jobs/([^/]+))", wrap([this](const auto& req) { return job(req.matches[1]); }));
        server.Get(p + R"(/catalogs/([^/]+))", wrap([this](const auto& req) {
                       return json_codec::to_json(*load_catalog(req.matches[1]));
                   }));
        server.Get(p + R"(/catalogs/([^/]+)/insights)",
                   wrap([this](const auto& req) { return insights(req.matches[1], req); }));
        server.Get(p + R"(/catalogs/([^/]+)/insights/([^/]+))", wrap([this](const auto& req) {
                       const auto catalog = load_catalog(req.matches[1]);
                       return insight_json(find_insight(*catalog, req.matches[2]));
                   }));
        server.Get(p + R"(/catalogs/([^/]+)/insights/([^/]+)/related)",
                   wrap([this](const auto& req) { return related(req.matches[1], req.matches[2], req); }));
        server.Get(p + R"(/catalogs/([^/]+)/projection)", wrap([this](const auto& req) {
                       const auto catalog = load_catalog(req.matches[1]);
                       if (!catalog->projection) {
                           throw ApiError{404, "projection_not_found", "catalog has no projection"};
                       }
                       return json_codec::to_json(*catalog->projection);
                   }));
        server.Get(p + R"(/catalogs/([^/]+)/density)", wrap([this](const auto& req) {
                       const auto catalog = load_catalog(req.matches[1]);
                       if (!catalog->density) throw ApiError{404, "density_not_found", "catalog has no density"};
                       return json_codec::to_json(*catalog->density);
                   }));
        server.Get(p + R"(/catalogs/([^/]+)/subspaces)",
                   wrap([this](const auto& req) { return subspaces(req.matches[1], req); }));

        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.status == 404 && res.body.empty()) {
                send(res, 404, {{"code", "not_found"}, {"message", "no such endpoint"}, {"detail", Json::object()}});
            }
        });
    }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) { impl_->routes(); }

Service::~Service() {
    stop();
    std::list<std::jthread> workers;
    {
        std::lock_guard lock(impl_->mutex);
        workers.swap(impl_->workers);
    }
    workers.clear();  // joins
}

int Service::bind() {
    std::error_code ec;
    fs::create_directories(impl_->dataset_dir(), ec);
    fs::create_directories(impl_->catalog_dir(), ec);
    if (ec || !fs::is_directory(impl_->config.data_dir)) {
        throw ServiceError("data directory " + impl_->config.data_dir.string() + " is not writable");
    }
    const auto& c = impl_->config;
    if (c.port == 0) {
        impl_->bound_port = impl_->server.bind_to_any_port(c.host);
    } else {
        impl_->bound_port = impl_->server.bind_to_port(c.host, c.port) ? c.port : -1;
    }
    if (impl_->bound_port < 0) {
        throw ServiceError("cannot listen on " + c.host + ":" + std::to_string(c.port));
    }
    return impl_->bound_port;
}

void Service::run() {
    if (impl_->bound_port < 0) throw ServiceError("run() before a successful bind()");
    {
        std::lock_guard lock(impl_->mutex);
        if (impl_->stop_requested) return;
        impl_->run_started = true;
    }
    impl_->server.listen_after_bind();
}

void Service::stop() {
    bool started = false;
    {
        std::lock_guard lock(impl_->mutex);
        impl_->stop_requested = true;
        started = impl_->run_started;
    }
    // httplib ignores stop() until the accept loop is up.
    if (started) {
        impl_->server.wait_until_ready();
        impl_->server.stop();
    }
}

void Service::wait_for_jobs() {
    std::unique_lock lock(impl_->mutex);
    impl_->jobs_changed.wait(lock, [&] { return impl_->active_job_by_dataset.empty(); });
}

int Service::port() const { return impl_->bound_port; }

}  // namespace insightmap

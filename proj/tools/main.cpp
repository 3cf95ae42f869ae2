// insightmap: mine a CSV into a catalog, print insight descriptions, or serve
// the HTTP API. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <csignal>
#include <pthread.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "insightmap/catalog.hpp"
#include "insightmap/catalog_json.hpp"
#include "insightmap/service.hpp"

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct MineArgs {
    std::string input;
    std::string output;
    std::size_t max_depth = 2;
    std::size_t min_rows = 5;
    std::string projection = "tsne";
    std::string embedding = "attribute";
    double perplexity = 30.0;
    std::uint64_t seed = 42;
    std::vector<std::string> dimensions;
    std::vector<std::string> measures;
};

struct DescribeArgs {
    std::string catalog;
    std::size_t top = 10;
};

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir;
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int run_mine(const MineArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const auto source = read_file(args.input);
    if (!source) {
        std::cerr << "error: cannot read " << args.input << "\n";
        return kRuntimeFailure;
    }
    insightmap::TypingOverrides overrides;
    for (const auto& f : args.dimensions) overrides[f] = insightmap::FieldRole::dimension;
    for (const auto& f : args.measures) overrides[f] = insightmap::FieldRole::measure;

    insightmap::MiningConfig config;
    config.max_depth = args.max_depth;
    config.min_rows = args.min_rows;
    config.projection = *insightmap::parse_projection_method(args.projection);
    config.embedding = *insightmap::parse_embedding_kind(args.embedding);
    config.perplexity = args.perplexity;
    config.seed = args.seed;

    try {
        const auto name = std::filesystem::path(args.input).stem().string();
        const auto dataset = insightmap::ingest_csv(*source, overrides, name);
        const auto catalog = insightmap::build_catalog(dataset, config);
        const auto bytes = insightmap::serialize_catalog(catalog);
        std::ofstream out(args.output, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        if (!out) {
            std::cerr << "error: cannot write " << args.output << "\n";
            return kRuntimeFailure;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char seconds[32];
        std::snprintf(seconds, sizeof seconds, "%.3f", elapsed);
        std::cout << "insights=" << catalog.insights.size() << " subspaces=" << catalog.subspaces.size()
                  << " elapsed=" << seconds << "s\n";
    } catch (const insightmap::IngestError& e) {
        std::cerr << "error: " << e.what();
        if (e.row()) std::cerr << " (data row " << *e.row() << ")";
        std::cerr << "\n";
        return kRuntimeFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
    return 0;
}

int run_describe(const DescribeArgs& args) {
    const auto bytes = read_file(args.catalog);
    if (!bytes) {
        std::cerr << "error: cannot read " << args.catalog << "\n";
        return kRuntimeFailure;
    }
    try {
        const auto catalog = insightmap::deserialize_catalog(*bytes);
        for (std::size_t i = 0; i < catalog.insights.size() && i < args.top; ++i) {
            std::cout << insightmap::describe_insight(catalog.insights[i]) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
    return 0;
}

int run_serve(const ServeArgs& args) {
    // Block the shutdown signals before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    insightmap::ServiceConfig config;
    config.host = args.host;
    config.port = args.port;
    if (!args.data_dir.empty()) {
        config.data_dir = args.data_dir;
    } else if (const char* env = std::getenv("INSIGHTMAP_DATA_DIR"); env && *env) {
        config.data_dir = env;
    }
    try {
        insightmap::Service service(config);
        const int port = service.bind();
        std::cout << "listening on http://" << config.host << ":" << port << "\n"
                  << "port=" << port << std::endl;
        std::thread server([&] { service.run(); });
        int received = 0;
        sigwait(&signals, &received);
        service.stop();
        server.join();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automated insight mining and insight-map catalogs"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    MineArgs mine;
    auto* mine_cmd = app.add_subcommand("mine", "Mine a CSV file into a catalog JSON file");
    mine_cmd->add_option("--input", mine.input, "CSV file")->required()->check(CLI::ExistingFile);
    mine_cmd->add_option("--output", mine.output, "Catalog JSON to write")->required();
    mine_cmd->add_option("--max-depth", mine.max_depth, "Maximum number of subspace filters")->capture_default_str();
    mine_cmd->add_option("--min-rows", mine.min_rows, "Minimum rows per subspace")->capture_default_str();
    mine_cmd->add_option("--projection", mine.projection, "tsne or mds")
        ->check(CLI::IsMember({"tsne", "mds"}))
        ->capture_default_str();
    mine_cmd->add_option("--embedding", mine.embedding, "attribute or instance")
        ->check(CLI::IsMember({"attribute", "instance"}))
        ->capture_default_str();
    mine_cmd->add_option("--perplexity", mine.perplexity, "t-SNE perplexity, capped at (M-1)/3")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mine_cmd->add_option("--seed", mine.seed, "Projection seed")->capture_default_str();
    mine_cmd->add_option("--dimensions", mine.dimensions, "Fields forced to be dimensions")->delimiter(',');
    mine_cmd->add_option("--measures", mine.measures, "Fields forced to be measures")->delimiter(',');

    DescribeArgs describe;
    auto* describe_cmd = app.add_subcommand("describe", "Print the top insights of a catalog, one per line");
    describe_cmd->add_option("--catalog", describe.catalog, "Catalog JSON")->required();
    describe_cmd->add_option("--top", describe.top, "Number of insights")->capture_default_str();

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
    serve_cmd->add_option("--port", serve.port, "Port, 0 for an ephemeral port")
        ->check(CLI::Range(0, 65535))
        ->capture_default_str();
    serve_cmd->add_option("--host", serve.host, "Listen address")->capture_default_str();
    serve_cmd->add_option("--data-dir", serve.data_dir, "Storage directory (default $INSIGHTMAP_DATA_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    if (mine_cmd->parsed()) return run_mine(mine);
    if (describe_cmd->parsed()) return run_describe(describe);
    return run_serve(serve);
}

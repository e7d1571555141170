// Command-line front end of the topsim shared library. Every subcommand is a
// thin shell over the C API: exit 0 on success, 2 on usage or input errors,
// 3 on numerical failures; errors go to stderr with a machine-parsable
// E_USAGE / E_INPUT / E_NUMERIC prefix.

#include <cstdio>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topsim/topsim.h"

namespace {

using nlohmann::json;

struct CliError {
    int exit_code;
    std::string prefix;
    std::string message;
};

int exit_code_for(topsim_status status) { return status == TOPSIM_ERR_NUMERIC ? 3 : 2; }

const char* prefix_for(topsim_status status) {
    return status == TOPSIM_ERR_NUMERIC ? "E_NUMERIC" : "E_INPUT";
}

void check(topsim_status status) {
    if (status != TOPSIM_OK) {
        throw CliError{exit_code_for(status), prefix_for(status), topsim_last_error()};
    }
}

[[noreturn]] void input_error(const std::string& message) {
    throw CliError{2, "E_INPUT", message};
}

struct DatasetHandle {
    topsim_dataset* ptr = nullptr;
    ~DatasetHandle() { topsim_dataset_free(ptr); }
};

struct FeaturesHandle {
    topsim_features* ptr = nullptr;
    ~FeaturesHandle() { topsim_features_free(ptr); }
};

struct ModelHandle {
    topsim_model* ptr = nullptr;
    ~ModelHandle() { topsim_model_free(ptr); }
};

struct StringHandle {
    char* ptr = nullptr;
    ~StringHandle() { topsim_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

double parse_double_field(const std::string& field, const std::string& what) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) input_error("malformed " + what);
    return value;
}

std::vector<double> parse_vector(const std::string& csv_row) {
    std::vector<double> values;
    std::string field;
    std::istringstream stream(csv_row);
    while (std::getline(stream, field, ',')) {
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.erase(field.begin());
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.pop_back();
        values.push_back(parse_double_field(field, "query vector"));
    }
    if (values.empty()) input_error("malformed query vector");
    return values;
}

std::vector<size_t> parse_index_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) input_error("cannot open " + path);
    std::vector<size_t> indices;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.erase(line.begin());
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
        if (line.empty()) continue;
        size_t value = 0;
        const char* begin = line.data();
        const char* end = begin + line.size();
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr != end) {
            input_error("invalid query index at line " + std::to_string(line_no) + " in " + path);
        }
        indices.push_back(value);
    }
    if (indices.empty()) input_error("no query indices in " + path);
    return indices;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) input_error("cannot open " + path + " for writing");
    out << contents;
    if (!out) input_error("cannot write " + path);
}

struct TrainArgs {
    std::string queries, database, relevance, out, report;
    double c = 1.0;
    double test_fraction = 0.3;
    std::uint64_t seed = 0;
    std::size_t max_iters = 10000;
    double rel_tol = 1e-8;
    double kkt_tol = 1e-6;
    bool normalize = false;
    std::size_t cap_per_pair = 0;
};

int run_train(const TrainArgs& args) {
    if (!(args.c > 0.0)) input_error("C must be positive");
    if (!(args.test_fraction > 0.0) || !(args.test_fraction < 1.0)) {
        input_error("test-fraction must lie in (0, 1)");
    }
    if (args.max_iters == 0) input_error("max-iters must be positive");
    if (!(args.rel_tol > 0.0)) input_error("rel-tol must be positive");
    if (!(args.kkt_tol > 0.0)) input_error("kkt-tol must be positive");

    DatasetHandle ds;
    check(topsim_dataset_load(args.queries.c_str(), args.database.c_str(), args.relevance.c_str(),
                              &ds.ptr));

    const size_t n = topsim_dataset_num_queries(ds.ptr);
    std::vector<size_t> train_indices(n), test_indices(n);
    size_t train_len = 0, test_len = 0;
    check(topsim_split_queries(n, args.test_fraction, args.seed, train_indices.data(), &train_len,
                               test_indices.data(), &test_len));
    train_indices.resize(train_len);
    test_indices.resize(test_len);

    topsim_train_options options;
    topsim_train_options_init(&options);
    options.c = args.c;
    options.max_iterations = args.max_iters;
    options.rel_tol = args.rel_tol;
    options.kkt_tol = args.kkt_tol;
    options.normalize = args.normalize ? 1 : 0;
    options.cap_per_pair = args.cap_per_pair;

    ModelHandle model;
    StringHandle solver_report;
    check(topsim_train(ds.ptr, train_indices.data(), train_indices.size(), &options, &model.ptr,
                       &solver_report.ptr));

    StringHandle train_eval, test_eval;
    check(topsim_evaluate(ds.ptr, model.ptr, train_indices.data(), train_indices.size(),
                          &train_eval.ptr));
    check(topsim_evaluate(ds.ptr, model.ptr, test_indices.data(), test_indices.size(),
                          &test_eval.ptr));

    check(topsim_model_save(model.ptr, args.out.c_str()));

    json report = json::parse(solver_report.str());
    const json train_json = json::parse(train_eval.str());
    const json test_json = json::parse(test_eval.str());
    report["seed"] = args.seed;
    report["test_fraction"] = args.test_fraction;
    report["train_queries"] = train_indices;
    report["test_queries"] = test_indices;
    report["train_mean_top_precision"] = train_json["mean_top_precision"];
    report["test_mean_top_precision"] = test_json["mean_top_precision"];
    report["train_skipped_queries"] = train_json["skipped_queries"];
    report["test_skipped_queries"] = test_json["skipped_queries"];
    if (!args.report.empty()) write_text_file(args.report, report.dump(2) + "\n");

    std::cout << "model=" << args.out << "\n"
              << "triplets=" << report["triplets"] << "\n"
              << "iterations=" << report["iterations"] << "\n"
              << "converged=" << report["converged"] << "\n"
              << "dual_objective=" << report["dual_objective"] << "\n"
              << "duality_gap=" << report["duality_gap"] << "\n"
              << "certified=" << report["certified"] << "\n"
              << "train_mean_top_precision=" << report["train_mean_top_precision"] << "\n"
              << "test_mean_top_precision=" << report["test_mean_top_precision"] << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string model, queries, database, relevance, query_indices, report;
};

int run_evaluate(const EvaluateArgs& args) {
    ModelHandle model;
    check(topsim_model_load(args.model.c_str(), &model.ptr));
    DatasetHandle ds;
    check(topsim_dataset_load(args.queries.c_str(), args.database.c_str(), args.relevance.c_str(),
                              &ds.ptr));

    StringHandle report;
    if (args.query_indices.empty()) {
        check(topsim_evaluate(ds.ptr, model.ptr, nullptr, 0, &report.ptr));
    } else {
        const std::vector<size_t> indices = parse_index_file(args.query_indices);
        check(topsim_evaluate(ds.ptr, model.ptr, indices.data(), indices.size(), &report.ptr));
    }

    const json parsed = json::parse(report.str());
    std::cout << "mean_top_precision=" << parsed["mean_top_precision"] << "\n"
              << "evaluated_queries=" << parsed["evaluated_queries"] << "\n"
              << "skipped_queries=" << parsed["skipped_queries"].size() << "\n";
    if (!args.report.empty()) write_text_file(args.report, report.str() + "\n");
    return 0;
}

struct RetrieveArgs {
    std::string model, database, query_vector, queries;
    std::optional<std::size_t> query_index;
    std::size_t top = 10;
};

int run_retrieve(const RetrieveArgs& args) {
    if (args.top == 0) input_error("top must be positive");
    const bool has_vector = !args.query_vector.empty();
    const bool has_index = args.query_index.has_value();
    if (has_vector == has_index) {
        input_error("exactly one of --query-vector and --query-index is required");
    }
    if (has_index && args.queries.empty()) {
        input_error("--query-index requires --queries");
    }

    ModelHandle model;
    check(topsim_model_load(args.model.c_str(), &model.ptr));
    FeaturesHandle database;
    check(topsim_features_load_csv(args.database.c_str(), &database.ptr));

    std::vector<double> query;
    if (has_vector) {
        query = parse_vector(args.query_vector);
    } else {
        FeaturesHandle queries;
        check(topsim_features_load_csv(args.queries.c_str(), &queries.ptr));
        query.resize(topsim_features_dim(queries.ptr));
        check(topsim_features_get_row(queries.ptr, *args.query_index, query.data(), query.size()));
    }

    const size_t m = topsim_features_rows(database.ptr);
    std::vector<size_t> order(m);
    std::vector<double> scores(m);
    check(topsim_rank(model.ptr, database.ptr, query.data(), query.size(), order.data(),
                      scores.data()));

    const size_t limit = std::min(args.top, m);
    for (size_t r = 0; r < limit; ++r) {
        std::printf("%zu,%zu,%.6f\n", r + 1, order[r], scores[order[r]]);
    }
    return 0;
}

struct SynthArgs {
    std::string kind, out_dir;
    std::size_t n = 0, m = 0, d = 0, relevant = 0;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

int run_synth(const SynthArgs& args) {
    DatasetHandle ds;
    check(topsim_dataset_generate(args.kind.c_str(), args.n, args.m, args.d, args.relevant,
                                  args.noise, args.seed, &ds.ptr));
    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) input_error("cannot create directory " + args.out_dir);
    const std::string queries = args.out_dir + "/queries.csv";
    const std::string database = args.out_dir + "/database.csv";
    const std::string relevance = args.out_dir + "/relevance.csv";
    check(topsim_dataset_save(ds.ptr, queries.c_str(), database.c_str(), relevance.c_str()));
    std::cout << "wrote " << queries << "\n"
              << "wrote " << database << "\n"
              << "wrote " << relevance << "\n";
    return 0;
}

struct BaselineArgs {
    std::size_t d = 0;
    std::string out;
};

int run_baseline(const BaselineArgs& args) {
    ModelHandle model;
    check(topsim_model_identity(args.d, &model.ptr));
    check(topsim_model_save(model.ptr, args.out.c_str()));
    std::cout << "model=" << args.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilinear similarity learning and top-precision retrieval evaluation"};
    app.require_subcommand(1);

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Learn a similarity model from a dataset");
    train->add_option("--queries", train_args.queries, "Query features CSV")->required();
    train->add_option("--database", train_args.database, "Database features CSV")->required();
    train->add_option("--relevance", train_args.relevance, "Binary relevance CSV")->required();
    train->add_option("--out", train_args.out, "Output model JSON path")->required();
    train->add_option("--c", train_args.c, "Trade-off parameter C (default 1.0)");
    train->add_option("--test-fraction", train_args.test_fraction,
                      "Share of queries held out for testing (default 0.3)");
    train->add_option("--seed", train_args.seed, "Split seed (default 0)");
    train->add_option("--max-iters", train_args.max_iters, "Solver iteration cap (default 10000)");
    train->add_option("--rel-tol", train_args.rel_tol,
                      "Relative objective-change tolerance (default 1e-8)");
    train->add_option("--kkt-tol", train_args.kkt_tol, "KKT residual tolerance (default 1e-6)");
    train->add_flag("--normalize", train_args.normalize, "L2-normalize features before training");
    train->add_option("--cap-per-pair", train_args.cap_per_pair,
                      "Working-set size per (query, relevant) pair (0 = full enumeration)");
    train->add_option("--report", train_args.report, "Write the training report JSON here");

    EvaluateArgs eval_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Mean top precision of a model");
    evaluate->add_option("--model", eval_args.model, "Model JSON path")->required();
    evaluate->add_option("--queries", eval_args.queries, "Query features CSV")->required();
    evaluate->add_option("--database", eval_args.database, "Database features CSV")->required();
    evaluate->add_option("--relevance", eval_args.relevance, "Binary relevance CSV")->required();
    evaluate->add_option("--query-indices", eval_args.query_indices,
                         "File with one query index per line (default: all queries)");
    evaluate->add_option("--report", eval_args.report, "Write the evaluation report JSON here");

    RetrieveArgs retrieve_args;
    CLI::App* retrieve = app.add_subcommand("retrieve", "Rank the database for one query");
    retrieve->add_option("--model", retrieve_args.model, "Model JSON path")->required();
    retrieve->add_option("--database", retrieve_args.database, "Database features CSV")
        ->required();
    retrieve->add_option("--query-vector", retrieve_args.query_vector,
                         "Query vector as a CSV row");
    retrieve->add_option("--query-index", retrieve_args.query_index,
                         "Row of --queries to use as the query");
    retrieve->add_option("--queries", retrieve_args.queries, "Query features CSV");
    retrieve->add_option("--top", retrieve_args.top, "Number of results to print (default 10)");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--kind", synth_args.kind, "separable or rotated")
        ->required()
        ->check(CLI::IsMember({"separable", "rotated"}));
    synth->add_option("--n", synth_args.n, "Number of queries")->required();
    synth->add_option("--m", synth_args.m, "Number of database vectors")->required();
    synth->add_option("--d", synth_args.d, "Feature dimension")->required();
    synth->add_option("--relevant", synth_args.relevant, "Relevant items per query")->required();
    synth->add_option("--noise", synth_args.noise, "Noise scale")->required();
    synth->add_option("--seed", synth_args.seed, "Generator seed")->required();
    synth->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();

    BaselineArgs baseline_args;
    CLI::App* baseline = app.add_subcommand("baseline", "Write the identity similarity model");
    baseline->add_option("--d", baseline_args.d, "Feature dimension")->required();
    baseline->add_option("--out", baseline_args.out, "Output model JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "E_USAGE: " << e.what() << "\n";
        return 2;
    }

    try {
        if (train->parsed()) return run_train(train_args);
        if (evaluate->parsed()) return run_evaluate(eval_args);
        if (retrieve->parsed()) return run_retrieve(retrieve_args);
        if (synth->parsed()) return run_synth(synth_args);
        if (baseline->parsed()) return run_baseline(baseline_args);
    } catch (const CliError& e) {
        std::cerr << e.prefix << ": " << e.message << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "E_INPUT: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

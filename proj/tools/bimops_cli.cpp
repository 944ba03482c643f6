#include <bimops/run.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

enum Exit { ok = 0, failed = 1, bad_config = 2, io_error = 3 };

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact bivariate orthogonal polynomial toolkit"};
    app.require_subcommand(1);

    std::string config_path, out, format;
    int max_degree = 0;
    auto add_options = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--max-degree", max_degree, "override max_degree");
        sub->add_option("--out", out, "output file (default: config output.path, else stdout)");
        sub->add_option("--format", format, "json, csv or latex (default: config output.format)");
    };
    auto* compute = app.add_subcommand("compute", "build the family and its recurrence matrices");
    auto* verify = app.add_subcommand("verify", "run the configured identity checks");
    auto* casestudy = app.add_subcommand("casestudy", "ball / simplex correspondence tables");
    for (auto* sub : {compute, verify, casestudy}) add_options(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        bimops::RunConfig config = bimops::load_config(config_path);
        if (max_degree != 0) config.max_degree = max_degree;
        if (!format.empty()) config.format = format;
        if (!out.empty()) config.path = out;
        bimops::validate(config);

        bimops::RunReport report = compute->parsed()     ? bimops::compute(config)
                                   : casestudy->parsed() ? bimops::case_study(config)
                                                         : bimops::run(config, "verify");
        if (config.path.empty())
            std::cout << bimops::render(report, config.format);
        else
            bimops::emit(report, config.format, config.path);

        for (const auto& c : report.checks)
            std::cerr << (c.passed() ? "pass " : "FAIL ") << c.name << " (" << c.records.size() << " identities)\n";
        return report.passed() ? ok : failed;
    } catch (const bimops::ConfigInvalid& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return bad_config;
    } catch (const bimops::IoFailure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return io_error;
    }
}

#include <doctest.h>

#include "macrovar/error.hpp"
#include "macrovar/ingest.hpp"

// Same configuration as the library, which compiles httplib with TLS.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <thread>

using namespace macrovar;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = MACROVAR_SOURCE_DIR;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(MACROVAR_BINARY_DIR) / "ingest_scratch";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write(const std::string& name, const std::string& body) {
    const fs::path p = scratch(name);
    std::ofstream(p) << body;
    return p;
}

SeriesConfig cfg_for(const fs::path& p, std::string name = "x") {
    SeriesConfig c;
    c.name = std::move(name);
    c.path = p;
    return c;
}

Errc code_of(auto&& fn, std::string* msg = nullptr) {
    try {
        fn();
    } catch (const Error& e) {
        if (msg) *msg = e.what();
        return e.code();
    }
    FAIL("expected an error");
    return Errc::config;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("well-formed files in every date style") {
    const auto a = read_series(cfg_for(write("iso.csv", "DATE,V\n2010-01-01,1.5\n2010-04-01,2\n2010-07-01,-3e1\n")));
    CHECK(a.size() == 3);
    CHECK(a.start() == Period{2010, 1});
    CHECK(a[2] == -30.0);
    const auto b = read_series(cfg_for(write("q.csv", "DATE,V\n2010Q3,1\n2010Q1,2\n2010Q2,3\n")));
    CHECK(b.start() == Period{2010, 1});
    CHECK(b[0] == 2.0);  // sorted by period
    const auto c = read_series(cfg_for(write("dash.csv", "DATE,V\n2010-Q4,1\n2011-Q1,2\n")));
    CHECK(c.start() == Period{2010, 4});
    SeriesConfig multi = cfg_for(write("multi.csv", "when,a,b\n2001Q1,1,10\n2001Q2,2,20\n"));
    multi.date_column = "when";
    multi.value_column = "b";
    CHECK(read_series(multi)[1] == 20.0);
}

TEST_CASE("malformed files") {
    std::string msg;
    CHECK(code_of([] { read_series(cfg_for(write("gap.csv", "DATE,V\n2010Q1,1\n2010Q3,2\n"))); }, &msg) == Errc::gap);
    CHECK(msg.find("2010Q2") != std::string::npos);
    CHECK(code_of([] { read_series(cfg_for(write("dot.csv", "DATE,V\n2010Q1,1\n2010Q2,.\n2010Q3,2\n"))); }, &msg) ==
          Errc::gap);
    CHECK(msg.find("2010Q2") != std::string::npos);
    CHECK(code_of([] { read_series(cfg_for(write("dup.csv", "DATE,V\n2010Q1,1\n2010-01-01,2\n"))); }, &msg) ==
          Errc::duplicate);
    CHECK(code_of([] { read_series(cfg_for(write("bad.csv", "DATE,V\n2010Q1,1\n2010Q2,1,5\n"))); }, &msg) ==
          Errc::parse);
    CHECK(code_of([] { read_series(cfg_for(write("sep.csv", "DATE,V\n2010Q1,\"1,000\"\n"))); }, &msg) == Errc::parse);
    CHECK(code_of([] { read_series(cfg_for(write("num.csv", "DATE,V\n2010Q1,1\n2010Q2,abc\n"))); }, &msg) ==
          Errc::parse);
    CHECK(msg.find(":3:") != std::string::npos);
    CHECK(code_of([] { read_series(cfg_for(write("date.csv", "DATE,V\n2010-02-01,1\n"))); }) == Errc::parse);
    CHECK(code_of([] { read_series(cfg_for(scratch("absent.csv"))); }) == Errc::io);
}

TEST_CASE("bundled data") {
    const auto cfg = load_config(kSource / "config/reference.yaml");
    const auto oil = read_series(cfg.series.front());
    CHECK(oil.size() == 71);
    CHECK(oil.start() == Period{2004, 1});
    CHECK(oil.end() == Period{2021, 3});

    const Dataset d = assemble(cfg);
    CHECK(d.num_vars() == 5);
    CHECK(d.length() == 70);
    CHECK(d.names() == std::vector<std::string>{"oil", "ipi", "fx", "cpi", "rate"});
    CHECK(d.start() == Period{2004, 2});
    CHECK(d.at("rate").history() == std::vector<Transform>{Transform::diff});
    CHECK(d.at("oil").history() == std::vector<Transform>{Transform::log, Transform::diff});

    const auto rob = load_config(kSource / "config/robustness.yaml");
    const Dataset r = assemble(rob);
    CHECK(r.num_vars() == 5);
    CHECK(r.length() == 70);
    CHECK(r.names()[1] == "growth");
    CHECK(r.names()[0] == "oil");
}

TEST_CASE("identity transforms give the raw aligned panel") {
    auto cfg = load_config(kSource / "config/reference.yaml");
    for (auto& s : cfg.series) s.transforms.clear();
    cfg.var.ordering.clear();
    const Dataset d = assemble(cfg);
    CHECK(d.length() == 71);
    for (const auto& v : d.variables()) {
        const auto* sc = &*std::find_if(cfg.series.begin(), cfg.series.end(), [&](auto& s) { return s.name == v.name(); });
        const auto raw = read_series(*sc);
        CHECK(std::vector<double>(v.values().begin(), v.values().end()) ==
              std::vector<double>(raw.values().begin(), raw.values().end()));
    }
}

TEST_CASE("config order drives dataset order") {
    auto cfg = load_config(kSource / "config/reference.yaml");
    cfg.var.ordering.clear();
    std::swap(cfg.series[1], cfg.series[4]);
    const Dataset d = assemble(cfg);
    CHECK(d.names() == std::vector<std::string>{"oil", "cpi", "fx", "ipi", "rate"});
    CHECK(assemble(cfg) == d);
}

TEST_CASE("growth basis") {
    auto cfg = load_config(kSource / "config/reference.yaml");
    const auto& g = cfg.series[2];
    CHECK(resolved_chain(cfg, g) == std::vector<Transform>{Transform::growth});
    cfg.growth_basis = GrowthBasis::yoy;
    CHECK(resolved_chain(cfg, g) == std::vector<Transform>{Transform::growth_yoy});
    CHECK(load_transformed(cfg, g).size() == 67);
    CHECK(load_level(cfg, cfg.series[0]).size() == 71);
}

TEST_CASE("CSV round trip") {
    const auto cfg = load_config(kSource / "config/reference.yaml");
    for (const auto& s : cfg.series) {
        const auto a = read_series(s);
        const fs::path out = scratch("rt_" + s.name + ".csv");
        write_series_csv(a, out);
        const auto b = read_series(cfg_for(out, s.name));
        CHECK(a == b);
    }
}

TEST_CASE("config validation") {
    const fs::path base = kSource / "config";
    const std::string good = read_text(base / "reference.yaml");
    CHECK_NOTHROW(parse_config(good, base));
    auto bad = [&](const std::string& from, const std::string& to) {
        std::string text = good;
        const auto at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        return code_of([&] { parse_config(text, base); });
    };
    CHECK(bad("role: shock", "role: endogenous") == Errc::config);
    CHECK(bad("lags: 1", "lags: 0") == Errc::config);
    CHECK(bad("ordering: [oil, ipi, fx, cpi, rate]", "ordering: [oil, ipi, fx, cpi]") == Errc::config);
    CHECK(bad("transforms: [diff]", "transforms: [sqrt]") == Errc::config);
    CHECK(bad("growth_basis: qoq", "growth_basis: monthly") == Errc::config);
    CHECK(bad("reps: 1000", "reps: many") == Errc::config);
    CHECK(code_of([] { parse_config("[1, 2", "."); }) == Errc::config);
    CHECK(code_of([&] { load_config(base / "missing.yaml"); }) == Errc::config);

    // The rendered config parses back to the same rendering.
    const auto cfg = parse_config(good, base);
    const std::string r = render_config(cfg);
    CHECK(render_config(parse_config(r, "/")) == r);
}

TEST_CASE("fetch against a local server") {
    httplib::Server server;
    server.Get("/fredgraph.csv", [](const httplib::Request& req, httplib::Response& res) {
        if (req.get_param_value("id") == "POILBREUSDQ")
            res.set_content("DATE,POILBREUSDQ\n2021-07-01,73.47\n", "text/csv");
        else
            res.status = 404;
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string base = "http://127.0.0.1:" + std::to_string(port) + "/fredgraph.csv";
    const std::string body = fetch_series_csv("POILBREUSDQ", base, std::chrono::seconds(5));
    CHECK(body.find("73.47") != std::string::npos);
    CHECK(code_of([&] { fetch_series_csv("NOPE", base, std::chrono::seconds(5)); }) == Errc::fetch);
    server.stop();
    t.join();
    CHECK(code_of([&] { fetch_series_csv("X", "http://127.0.0.1:1/x", std::chrono::seconds(2)); }) == Errc::fetch);
    CHECK(code_of([] { fetch_series_csv("X", "no-scheme"); }) == Errc::config);
}

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "garland/lab.hpp"
#include "garland/text.hpp"

using namespace garland;
using namespace garland::text;

namespace fs = std::filesystem;

namespace {

calc::AlgebraParams ring_params(sign::Ring ring) {
    calc::AlgebraParams p;
    p.ring = ring;
    return p;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<fs::path> corpus_files() {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(fs::path(GARLAND_TEST_DIR) / "corpus"))
        if (entry.path().extension() == ".gel") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::size_t count_lines_with(const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);)
        if (line.find(needle) != std::string::npos) ++n;
    return n;
}

void check_error(const std::string& input, std::size_t line, std::size_t column, const std::string& fragment) {
    CAPTURE(input);
    try {
        parse_element(input, {});
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == line);
        CHECK(e.column() == column);
        CHECK(e.message().find(fragment) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("corpus: at least 30 files, each round-trips in both rings") {
    const auto files = corpus_files();
    CHECK(files.size() >= 30);
    for (const auto& f : files) {
        CAPTURE(f.filename().string());
        const auto content = slurp(f);
        for (auto ring : {sign::Ring::Z2, sign::Ring::Z}) {
            const auto p = ring_params(ring);
            const auto e = parse_element(content, p);
            const auto printed = print_element(e);
            CHECK(parse_element(printed, p) == e);
            CHECK(print_element(parse_element(printed, p)) == printed);
        }
    }
}

TEST_CASE("corpus: canonical prints match the golden listing") {
    std::string listing;
    for (const auto& f : corpus_files())
        listing += f.stem().string() + ": " + print_element(parse_element(slurp(f), ring_params(sign::Ring::Z))) + "\n";
    const auto golden = fs::path(GARLAND_TEST_DIR) / "golden" / "corpus_canonical.txt";
    if (std::getenv("GARLAND_UPDATE_GOLDEN")) std::ofstream(golden, std::ios::binary) << listing;
    CHECK(slurp(golden) == listing);
}

TEST_CASE("printing emits canonical order and form") {
    const auto p = ring_params(sign::Ring::Z);
    const auto dir = fs::path(GARLAND_TEST_DIR) / "corpus";
    auto load = [&](const std::string& name) { return print_element(parse_element(slurp(dir / (name + ".gel")), p)); };
    CHECK(load("permuted_copies_a") == load("permuted_copies_b"));
    CHECK(load("two_terms") == load("two_terms_reversed"));
    CHECK(load("cancelling_terms") == "0");
    CHECK(load("like_terms").rfind("2*gen(a,", 0) == 0);
    CHECK(load("compound_name_unsorted").rfind("gen(a.b.c,", 0) == 0);
    CHECK(load("whitespace") == "gen(a, deg=2, copies=1, marks=[{g=1;(0,p0)}])");
    CHECK(print_element(parse_element(slurp(dir / "like_terms.gel"), ring_params(sign::Ring::Z2))) == "0");
}

TEST_CASE("the unit generator text parses to unit()") {
    for (auto ring : {sign::Ring::Z2, sign::Ring::Z}) {
        const auto p = ring_params(ring);
        CHECK(parse_element("gen(u, deg=0, copies=0, marks=[{g=1;}])", p) == calc::unit(p));
    }
}

TEST_CASE("parse errors carry line and column") {
    check_error("gen(a, deg=2, copies=1, marks=[{g=0;(0,p)}])", 1, 35, "grading must be ≥ 1");
    check_error("gen(a, deg=2, copies=1, marks=[{g=1;(1,p)}])", 1, 38, "copy index 1 out of range");
    check_error("gen(a, deg=2, copies=0, marks=[{g=1;(0,p)}])", 1, 38, "out of range");
    check_error("gen(a, deg=1, copies=1,\n  marks=[{g=1;(0,p)]])", 2, 20, "expected '}'");
    check_error("gen(a deg=1, copies=1, marks=[])", 1, 7, "expected ','");
    check_error("", 1, 1, "expected 'gen'");
    check_error("gen(a, deg=1, copies=1, marks=[]) gen", 1, 35, "expected '+'");
    check_error("gen(a.u, deg=1, copies=1, marks=[])", 1, 5, "'u' cannot be part");
    check_error("gen(a, deg=x, copies=1, marks=[])", 1, 12, "expected an integer");
    check_error("gen(a, deg=1, copies=-1, marks=[])", 1, 22, "non-negative");
}

TEST_CASE("random elements round-trip through text") {
    for (auto ring : {sign::Ring::Z2, sign::Ring::Z}) {
        const auto p = ring_params(ring);
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            for (auto fam : {lab::Family::General, lab::Family::OneGradingOne}) {
                const auto in = lab::random_inputs(seed, 2, lab::Bounds{}, fam, p);
                const auto e = calc::add(lab::slot_element(in.slots[0], fam, p), lab::slot_element(in.slots[1], fam, p));
                CHECK(parse_element(print_element(e), p) == e);
                // Operation outputs carry no freshness after a product.
                const auto prod = calc::product(lab::slot_element(in.slots[0], fam, p), lab::slot_element(in.slots[1], fam, p));
                CHECK(parse_element(print_element(prod), p) == prod);
            }
        }
    }
}

TEST_CASE("export_dot: node and edge counts, determinism") {
    const auto empty = export_dot(GarlandShape{});
    CHECK(count_lines_with(empty, "[shape=") == 0);
    CHECK(count_lines_with(empty, "->") == 0);

    const GarlandShape joined{2, {Mark{1, {{0, 0}, {1, 0}}}}};
    const auto dot = export_dot(joined);
    CHECK(count_lines_with(dot, "[shape=") == 3);
    CHECK(count_lines_with(dot, "->") == 2);
    CHECK(count_lines_with(dot, "label=\"g=1\"") == 1);

    const GarlandShape a{3, {Mark{1, {{0, 0}, {2, 0}}}, Mark{2, {{1, 5}}}}};
    const GarlandShape b{3, {Mark{2, {{2, 1}}}, Mark{1, {{0, 4}, {1, 4}}}}};
    CHECK(export_dot(a) == export_dot(b));

    // Edge multiplicity equals the number of the mark's points on that copy.
    const GarlandShape twice{1, {Mark{1, {{0, 0}, {0, 1}}}}};
    CHECK(count_lines_with(export_dot(twice), "m0 -> c0") == 2);
}

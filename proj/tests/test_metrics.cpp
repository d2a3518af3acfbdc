#include "support.hpp"

#include "potsynth/classes.hpp"
#include "potsynth/error.hpp"

#include <doctest.h>

using namespace potsynth;
using namespace potsynth::metrics;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

// A: pots a1 (2 photos), a2 (1 photo); B: b1 (1 photo)
std::vector<PredictionRow> toy_rows() {
    return {{0, "a1-p0", "a1", "A", "A"}, {0, "a1-p1", "a1", "A", "A"}, {0, "a2-p0", "a2", "A", "A"},
            {0, "b1-p0", "b1", "B", "B"}};
}

std::vector<std::string> all_classes() { return {kClassLabels.begin(), kClassLabels.end()}; }

// Rows for every test photo of the plan, each predicted with `predict`.
template <class F>
std::vector<PredictionRow> plan_rows(const dataset::Catalog& cat, const dataset::SplitPlan& plan, F predict) {
    std::vector<PredictionRow> rows;
    for (std::size_t s = 0; s < plan.splits.size(); ++s)
        for (const auto& [label, cs] : plan.splits[s].classes)
            for (const auto& vid : cs.test)
                for (const auto& p : cat.find_vessel(vid)->photos)
                    rows.push_back({static_cast<int>(s), p.photo_id, vid, label, predict(label, p)});
    return rows;
}

}  // namespace

TEST_CASE("weights examples") {
    SUBCASE("one vessel with k photos") {
        std::vector<PredictionRow> rows;
        for (int k = 0; k < 7; ++k) rows.push_back({0, "p" + std::to_string(k), "v", "Dr33", "Dr33"});
        const auto w = weights(rows, {{"Dr33", 1.0}});
        for (double x : w) CHECK(x == doctest::Approx(1.0 / 7).epsilon(1e-15));
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
    }
    SUBCASE("hand-evaluated three-vessel case") {
        const auto w = weights(toy_rows(), uniform_prior({"A", "B"}));
        CHECK(w == std::vector<double>{1.0 / 8, 1.0 / 8, 1.0 / 4, 1.0 / 2});
    }
    SUBCASE("uniform prior puts 1/9 on every class") {
        const auto cat = testsupport::make_catalog(testsupport::catalog_counts(), 4);
        const auto plan = dataset::make_splits(cat, 9, 3);
        Rng rng(1);
        const auto rows = testsupport::random_predictions(cat, plan, rng, 0.6);
        const auto split0 = by_split(rows).at(0);
        const auto w = weights(split0, uniform_prior(all_classes()));
        std::map<std::string, double> mass;
        for (std::size_t k = 0; k < w.size(); ++k) mass[split0[k].true_class] += w[k];
        CHECK(mass.size() == 9);
        for (const auto& [label, m] : mass) CHECK(std::abs(m - 1.0 / 9) < 1e-15);
    }
    SUBCASE("errors") {
        CHECK(code_of([] { weights(toy_rows(), uniform_prior({"A", "B", "C"})); }) == ErrorCode::EmptyClassInTest);
        CHECK(code_of([] { weights(toy_rows(), {{"A", 1.0}}); }) == ErrorCode::UnknownClass);
        CHECK_NOTHROW(weights(toy_rows(), {{"A", 0.5}, {"B", 0.5}, {"C", 0.0}}));
        CHECK(code_of([] { uniform_prior({}); }) == ErrorCode::InvalidInput);
    }
}

TEST_CASE("acc_single examples") {
    auto rows = toy_rows();
    const auto prior = uniform_prior({"A", "B"});
    CHECK(acc_single(rows, weights(rows, prior)) == 1.0);
    CHECK(acc_single(rows, weights(rows, {{"A", 0.9}, {"B", 0.1}})) == doctest::Approx(1.0));
    auto wrong = rows;
    for (auto& r : wrong) r.predicted_class = r.true_class == "A" ? "B" : "A";
    CHECK(acc_single(wrong, weights(wrong, prior)) == 0.0);
    rows[2].predicted_class = "B";
    CHECK(acc_single(rows, weights(rows, prior)) == 0.75);
    CHECK(code_of([&] { acc_single(rows, {0.5}); }) == ErrorCode::MisalignedInputs);
}

TEST_CASE("duplicating a photo row leaves the accuracy unchanged") {
    const auto cat = testsupport::make_catalog(testsupport::catalog_counts(), 14);
    const auto plan = dataset::make_splits(cat, 2, 2);
    Rng rng(2);
    const auto rows = by_split(testsupport::random_predictions(cat, plan, rng, 0.5)).at(1);
    const auto prior = uniform_prior(all_classes());
    const double base = acc_single(rows, weights(rows, prior));
    for (int t = 0; t < 20; ++t) {
        auto dup = rows;
        const auto k = static_cast<std::size_t>(uniform_int(rng, 0, long(rows.size()) - 1));
        // same vessel, one more photo with the same outcome as all its siblings
        std::vector<PredictionRow> same;
        for (auto& r : dup)
            if (r.vessel_id == rows[k].vessel_id) r.predicted_class = rows[k].predicted_class;
        auto extra = rows[k];
        extra.photo_id += "-dup";
        dup.push_back(extra);
        auto ref = rows;
        for (auto& r : ref)
            if (r.vessel_id == rows[k].vessel_id) r.predicted_class = rows[k].predicted_class;
        CHECK(std::abs(acc_single(dup, weights(dup, prior)) - acc_single(ref, weights(ref, prior))) < 1e-12);
    }
    CHECK(base >= 0.0);
}

TEST_CASE("uniform-prior accuracy equals the triple-nested average") {
    const auto cat = testsupport::make_catalog(testsupport::catalog_counts(), 21);
    Rng rng(22);
    for (int t = 0; t < 20; ++t) {
        const auto plan = dataset::make_splits(cat, 100 + t, 4);
        const auto rows = testsupport::random_predictions(cat, plan, rng, uniform01(rng));
        for (const auto& [id, split_rows] : by_split(rows)) {
            const auto w = weights(split_rows, uniform_prior(all_classes()));
            CHECK(std::abs(acc_single(split_rows, w) - testsupport::triple_average_oracle(split_rows)) < 1e-12);
            CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) < 1e-12);
            const auto wm = weights(split_rows, dataset::mol_prior(cat));
            CHECK(std::abs(std::accumulate(wm.begin(), wm.end(), 0.0) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("accuracy equals the prior-weighted confusion diagonal") {
    const auto cat = testsupport::make_catalog(testsupport::catalog_counts(), 31);
    const auto plan = dataset::make_splits(cat, 5, 3);
    Rng rng(32);
    const auto rows = testsupport::random_predictions(cat, plan, rng, 0.7);
    const auto prior = dataset::mol_prior(cat);
    for (const auto& [id, split_rows] : by_split(rows)) {
        const auto cm = confusion(split_rows, all_classes());
        double diag = 0;
        for (std::size_t i = 0; i < cm.classes.size(); ++i) diag += prior.at(cm.classes[i]) * cm.m[i][i];
        CHECK(std::abs(diag - acc_single(split_rows, weights(split_rows, prior))) < 1e-12);
    }
}

TEST_CASE("aggregate") {
    const auto a = aggregate({0.7, 0.9});
    CHECK(a.mean == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(a.variance == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(a.min == 0.7);
    CHECK(a.max == 0.9);
    CHECK(a.n == 2);
    const auto flat = aggregate(std::vector<double>(20, 0.65));
    CHECK(flat.variance == 0.0);
    CHECK(flat.two_sigma_bootstrap == 0.0);

    Rng rng(3);
    std::vector<double> xs;
    for (int k = 0; k < 20; ++k) xs.push_back(uniform(rng, 0.6, 0.9));
    const auto s = aggregate(xs);
    CHECK(std::abs(s.variance - testsupport::bessel_variance(xs)) < 1e-15);
    CHECK(s.sigma == std::sqrt(s.variance));
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);
    // bootstrap std of the mean is close to sigma/sqrt(n)
    const double se = std::sqrt(s.variance * (xs.size() - 1) / xs.size() / xs.size());
    CHECK(s.two_sigma_bootstrap == doctest::Approx(2 * se).epsilon(0.05));
    CHECK(aggregate(xs).two_sigma_bootstrap == s.two_sigma_bootstrap);
    CHECK(aggregate(xs, 99).two_sigma_bootstrap != s.two_sigma_bootstrap);

    CHECK(code_of([] { aggregate({0.5}); }) == ErrorCode::TooFewSplits);
    CHECK(code_of([] { aggregate({}); }) == ErrorCode::TooFewSplits);
}

TEST_CASE("confusion matrix") {
    const auto cat = testsupport::make_catalog(testsupport::catalog_counts(), 41);
    const auto plan = dataset::make_splits(cat, 6, 5);
    SUBCASE("perfect classifier gives the identity") {
        const auto rows = plan_rows(cat, plan, [](const std::string& l, const auto&) { return l; });
        const auto cm = confusion(rows, all_classes());
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) CHECK(cm.m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0));
        for (int n : cm.splits_present) CHECK(n == 5);
    }
    SUBCASE("rows sum to one") {
        Rng rng(42);
        const auto rows = testsupport::random_predictions(cat, plan, rng, 0.4);
        const auto cm = confusion(rows, all_classes());
        for (const auto& row : cm.m) CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) < 1e-9);
    }
    SUBCASE("hand-computed toy matrix") {
        // split 0: a1 photos right/wrong, a2 right, b1 wrong; split 1: only B present, right
        std::vector<PredictionRow> rows = {{0, "a1-p0", "a1", "A", "A"}, {0, "a1-p1", "a1", "A", "B"},
                                           {0, "a2-p0", "a2", "A", "A"}, {0, "b1-p0", "b1", "B", "A"},
                                           {1, "b1-p0", "b1", "B", "B"}};
        const auto cm = confusion(rows, {"A", "B"});
        CHECK(cm.m[0][0] == doctest::Approx(0.75));
        CHECK(cm.m[0][1] == doctest::Approx(0.25));
        CHECK(cm.m[1][0] == doctest::Approx(0.5));
        CHECK(cm.m[1][1] == doctest::Approx(0.5));
        CHECK(cm.splits_present == std::vector<int>{1, 2});
        CHECK(code_of([&] { confusion(rows, {"A"}); }) == ErrorCode::UnknownClass);
    }
    SUBCASE("absent class row stays empty") {
        const std::vector<PredictionRow> rows = {{0, "p", "v", "Dr33", "Dr18"}};
        const auto cm = confusion(rows, all_classes());
        CHECK_FALSE(cm.populated(0));
        CHECK(cm.populated(4));
        CHECK(cm.m[4][0] == 1.0);
    }
}

TEST_CASE("major confusions") {
    CHECK(major_confusion_threshold(0.63, 9) == doctest::Approx(0.0925));
    std::vector<std::vector<double>> m(9, std::vector<double>(9, 0.0));
    for (std::size_t i = 0; i < 9; ++i) m[i][i] = 1.0;
    CHECK(major_confusions(m).empty());

    m[0] = {0.63, 0.04, 0.02, 0.02, 0.06, 0.02, 0.14, 0.03, 0.03};
    const auto f = major_confusions(m);
    REQUIRE(f.size() == 1);
    CHECK(f[0].i == 0);
    CHECK(f[0].j == 6);

    m[1] = {0.0125, 0.95, 0.0125, 0.0125, 0.0125, 0.0, 0.0, 0.0, 0.0};
    CHECK(major_confusions(m).size() == 1);  // exactly at threshold: not flagged

    // rounding above one on the diagonal
    std::vector<std::vector<double>> id3 = {{1.0 + 1e-15, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    CHECK(major_confusions(id3).empty());
    CHECK(code_of([] { major_confusions({{1.0, 0.0}, {0.0}}); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { major_confusion_threshold(0.5, 1); }) == ErrorCode::InvalidInput);
}

TEST_CASE("published ImageNet confusion matrix reproduces its red cells") {
    const std::vector<std::vector<double>> pct = {
        {63, 4, 2, 2, 6, 2, 14, 3, 3}, {5, 76, 5, 1, 3, 3, 2, 1, 4},  {2, 4, 74, 2, 2, 9, 2, 2, 4},
        {2, 2, 3, 74, 2, 1, 4, 7, 5},  {3, 2, 2, 1, 89, 2, 0, 1, 1},  {1, 4, 11, 1, 1, 67, 11, 1, 3},
        {8, 4, 2, 4, 1, 12, 60, 2, 8}, {2, 9, 1, 11, 3, 1, 1, 68, 4}, {1, 6, 2, 3, 2, 2, 7, 1, 76}};
    auto m = pct;
    for (auto& row : m)
        for (auto& v : row) v /= 100.0;
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (const auto& f : major_confusions(m)) got.emplace(f.i, f.j);
    const std::set<std::pair<std::size_t, std::size_t>> red = {{0, 6}, {2, 5}, {3, 7}, {4, 0}, {5, 2},
                                                               {5, 6}, {6, 5}, {7, 1}, {7, 3}, {8, 6}};
    CHECK(got == red);
}

TEST_CASE("subgroup report") {
    const auto cat = testsupport::make_catalog(testsupport::catalog_counts(), 51);
    const auto plan = dataset::make_splits(cat, 7, 4);
    Rng rng(52);
    const auto rows = testsupport::random_predictions(cat, plan, rng, 0.6);
    const auto classes = all_classes();

    SUBCASE("class grouping equals per-class accuracy") {
        const auto rep = subgroup_report(rows, cat, Grouping::Class, classes);
        REQUIRE(rep.groups.size() == 9);
        const auto cm = confusion(rows, classes);
        for (std::size_t i = 0; i < 9; ++i) {
            const auto& st = rep.groups[i].classes.at(classes[i]);
            CHECK_FALSE(st.absent);
            CHECK(st.accuracy == doctest::Approx(cm.m[i][i]).epsilon(1e-12));
            CHECK(st.splits_present == 4);
            for (std::size_t j = 0; j < 9; ++j)
                if (j != i) CHECK(rep.groups[i].classes.at(classes[j]).absent);
        }
        CHECK(rep.groups[1].classes.at("Dr24-25").mean_vessels == 2.0);
    }
    SUBCASE("damaged split covers all vessels") {
        const auto rep = subgroup_report(rows, cat, Grouping::Damaged, classes);
        REQUIRE(rep.groups.size() == 2);
        for (const auto& c : classes) {
            const auto& d = rep.groups[0].classes.at(c);
            const auto& u = rep.groups[1].classes.at(c);
            CHECK(d.mean_vessels + u.mean_vessels ==
                  doctest::Approx(double(cat.vessels_by_class().at(c).size() - 6)));
        }
    }
    SUBCASE("class without damaged vessels is absent") {
        std::vector<dataset::VesselRecord> vs;
        vs.push_back({"x1", "33", "Dr33", false, {{"x1-p0", ViewLabel::Standard}}});
        vs.push_back({"x2", "33", "Dr33", true, {{"x2-p0", ViewLabel::Zenith}, {"x2-p1", ViewLabel::Standard}}});
        vs.push_back({"y1", "35", "Dr35", false, {{"y1-p0", ViewLabel::Standard}}});
        const dataset::Catalog small(vs);
        const std::vector<PredictionRow> r = {{0, "x1-p0", "x1", "Dr33", "Dr33"},
                                              {0, "x2-p0", "x2", "Dr33", "Dr33"},
                                              {0, "x2-p1", "x2", "Dr33", "Dr35"},
                                              {0, "y1-p0", "y1", "Dr35", "Dr35"},
                                              {1, "x1-p0", "x1", "Dr33", "Dr35"},
                                              {1, "y1-p0", "y1", "Dr35", "Dr35"}};
        const auto rep = subgroup_report(r, small, Grouping::Damaged, {"Dr33", "Dr35"});
        const auto& dmg = rep.groups[0];
        CHECK(dmg.group == "damaged");
        CHECK(dmg.classes.at("Dr35").absent);
        CHECK(dmg.classes.at("Dr33").accuracy == 0.5);
        CHECK(dmg.classes.at("Dr33").mean_vessels == 0.5);
        const auto& und = rep.groups[1];
        // split 0: x1 right, y1 right; split 1: x1 wrong, y1 right
        CHECK(und.classes.at("Dr33").accuracy == 0.5);
        CHECK(und.classes.at("Dr35").accuracy == 1.0);
        CHECK(und.overall_per_split == std::vector<double>{1.0, 0.5});

        const auto views = subgroup_report(r, small, Grouping::ViewLabel, {"Dr33", "Dr35"});
        CHECK(views.groups[1].group == "zenith");
        CHECK(views.groups[1].classes.at("Dr33").accuracy == 1.0);
        CHECK(views.groups[2].classes.at("Dr33").absent);
    }
}

TEST_CASE("training-size bound") {
    SUBCASE("reference constant") {
        const auto s = min_train_size(4096, 0.05, 0.1);
        CHECK(std::abs(double(s.n) - 35238500.0) / 35238500.0 < 0.01);
        CHECK(risk_bound(4096, 0.05, double(s.n)) <= 0.1);
        CHECK(risk_bound(4096, 0.05, double(s.n - 1)) > 0.1);
        CHECK(s.bound == risk_bound(4096, 0.05, double(s.n)));
    }
    SUBCASE("doubling the gap needs fewer samples") {
        CHECK(min_train_size(4096, 0.05, 0.2).n < min_train_size(4096, 0.05, 0.1).n);
        CHECK(min_train_size(100, 0.01, 0.5).n < min_train_size(100, 0.01, 0.25).n);
    }
    SUBCASE("small case equals a linear scan") {
        const auto start = decreasing_regime_start(2, 0.5);
        std::uint64_t n = start;
        while (risk_bound(2, 0.5, double(n)) > 0.5) ++n;
        CHECK(min_train_size(2, 0.5, 0.5).n == n);
    }
    SUBCASE("random cases satisfy the defining inequalities") {
        Rng rng(60);
        for (int t = 0; t < 50; ++t) {
            const double h = std::floor(uniform(rng, 1, 5000)), delta = uniform(rng, 0.001, 0.5),
                         gap = uniform(rng, 0.05, 2.0);
            const auto s = min_train_size(h, delta, gap);
            CHECK(risk_bound(h, delta, double(s.n)) <= gap);
            if (s.n > decreasing_regime_start(h, delta)) CHECK(risk_bound(h, delta, double(s.n - 1)) > gap);
        }
    }
    SUBCASE("errors") {
        CHECK(code_of([] { min_train_size(0.5, 0.05, 0.1); }) == ErrorCode::InvalidInput);
        CHECK(code_of([] { min_train_size(10, 1.0, 0.1); }) == ErrorCode::InvalidInput);
        CHECK(code_of([] { min_train_size(10, 0.05, 0.0); }) == ErrorCode::InvalidInput);
        CHECK(code_of([] { min_train_size(10, 0.05, -1.0); }) == ErrorCode::InvalidInput);
        CHECK(code_of([] { min_train_size(1e6, 0.05, 1e-12); }) == ErrorCode::NoSolution);
    }
}

TEST_CASE("prediction validation") {
    const auto cat = testsupport::make_catalog({{"Dr18", 8}, {"Dr33", 8}}, 71);
    const auto plan = dataset::make_splits(cat, 8, 2);
    const auto rows = plan_rows(cat, plan, [](const std::string& l, const auto&) { return l; });
    CHECK_NOTHROW(validate_predictions(rows, cat, &plan));
    CHECK_NOTHROW(validate_predictions(rows, cat, nullptr));

    auto bad = rows;
    bad.push_back(bad.front());
    CHECK(code_of([&] { validate_predictions(bad, cat, nullptr); }) == ErrorCode::InvalidInput);
    bad = rows;
    bad[0].vessel_id = "nobody";
    CHECK(code_of([&] { validate_predictions(bad, cat, nullptr); }) == ErrorCode::InvalidInput);
    bad = rows;
    bad[0].true_class = bad[0].true_class == "Dr18" ? "Dr33" : "Dr18";
    CHECK(code_of([&] { validate_predictions(bad, cat, nullptr); }) == ErrorCode::InvalidInput);
    bad = rows;
    bad[0].predicted_class = "Dr99";
    CHECK(code_of([&] { validate_predictions(bad, cat, nullptr); }) == ErrorCode::UnknownClass);
    bad = rows;
    bad.pop_back();
    CHECK(code_of([&] { validate_predictions(bad, cat, &plan); }) == ErrorCode::InvalidInput);
    bad = rows;
    bad[0].split_id = 7;
    CHECK(code_of([&] { validate_predictions(bad, cat, &plan); }) == ErrorCode::InvalidInput);
    // a training vessel is not a test vessel
    bad = rows;
    const auto& train_id = plan.splits[0].classes.at("Dr18").train[0];
    bad.push_back({0, cat.find_vessel(train_id)->photos[0].photo_id, train_id, "Dr18", "Dr18"});
    CHECK(code_of([&] { validate_predictions(bad, cat, &plan); }) == ErrorCode::InvalidInput);
}

TEST_CASE("evaluate end to end") {
    const auto cat = testsupport::make_catalog(testsupport::catalog_counts(), 81);
    const auto plan = dataset::make_splits(cat, 8, 5);
    Rng rng(82);
    const auto perfect = plan_rows(cat, plan, [](const std::string& l, const auto&) { return l; });
    const auto noisy = testsupport::random_predictions(cat, plan, rng, 0.7);
    EvalOptions opt;
    opt.priors = {PriorKind::Uniform, PriorKind::Mol};
    opt.reference = "perfect";
    const auto rep = evaluate({{"perfect", perfect}, {"noisy", noisy}}, cat, &plan, opt);
    REQUIRE(rep.configurations.size() == 2);
    const auto& p = rep.configurations[0];
    CHECK(p.priors[0].stats.mean == doctest::Approx(1.0));
    CHECK(p.flags.empty());
    const auto& n = rep.configurations[1];
    for (const auto& [id, acc] : n.priors[0].per_split) {
        std::vector<PredictionRow> split_rows;
        for (const auto& r : noisy)
            if (r.split_id == id) split_rows.push_back(r);
        CHECK(std::abs(acc - testsupport::triple_average_oracle(split_rows)) < 1e-12);
    }
    CHECK(n.subgroups.size() == 3);

    const auto j = to_json(rep);
    CHECK(j["reference"] == "perfect");
    CHECK(j["configurations"][1]["priors"]["uniform"]["reality_gap"].get<double>() ==
          doctest::Approx(1.0 - n.priors[0].stats.mean));
    CHECK(j["configurations"][1]["priors"].contains("mol"));
    CHECK(j["configurations"][0]["confusion"]["matrix"].size() == 9);
    const auto text = to_text(rep);
    CHECK(text.find("== noisy ==") != std::string::npos);
    CHECK(text.find("reality gap vs perfect") != std::string::npos);
    CHECK(text.find("by damaged") != std::string::npos);

    opt.reference = "missing";
    CHECK(code_of([&] { evaluate({{"perfect", perfect}}, cat, &plan, opt); }) == ErrorCode::InvalidInput);
    CHECK(code_of([&] { evaluate({}, cat, &plan, {}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("predictions CSV round trip") {
    testsupport::TempDir dir;
    const auto rows = toy_rows();
    write_predictions_csv(rows, dir / "p.csv");
    const auto back = read_predictions_csv(dir / "p.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(back[k].photo_id == rows[k].photo_id);
        CHECK(back[k].predicted_class == rows[k].predicted_class);
        CHECK(back[k].split_id == rows[k].split_id);
    }
    std::ofstream(dir / "h.csv") << "split,photo\n";
    CHECK(code_of([&] { read_predictions_csv(dir / "h.csv"); }) == ErrorCode::InvalidInput);
    std::ofstream(dir / "s.csv") << "split_id,photo_id,vessel_id,true_class,predicted_class\nx,p,v,A,A\n";
    CHECK(code_of([&] { read_predictions_csv(dir / "s.csv"); }) == ErrorCode::InvalidInput);
    CHECK(code_of([&] { read_predictions_csv(dir / "none.csv"); }) == ErrorCode::Io);
    CHECK(parse_grouping("view") == Grouping::ViewLabel);
    CHECK_FALSE(parse_grouping("colour"));
}

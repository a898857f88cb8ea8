#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <flatdeform/funcreal.hpp>
#include <flatdeform/theta.hpp>

using namespace flatdeform;

namespace {

struct Xorshift64 {
    uint64_t s = 0x9e3779b97f4a7c15ull;
    uint64_t next()
    {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    int range(int lo, int hi) { return lo + static_cast<int>(next() % (hi - lo + 1)); }
};

AlgebraElement one_term(Kind k, const Monomial& m, const QSeries& c)
{
    AlgebraElement e(k, m.degree(), m.weight());
    e.add_term(m, c);
    return e;
}

/* brute-force list of weight-l, degree-n monomials on an index window */
void enum_rec(int l, int n, int imin, int imax, bool fermi,
              std::vector<std::pair<int, int>>& cur, std::vector<Monomial>& out)
{
    if (l == 0) {
        if (n == 0)
            out.push_back(Monomial{cur});
        return;
    }
    for (int i = imin; i <= imax; ++i)
        for (int a = 1; a <= (fermi ? 1 : l); ++a) {
            cur.push_back({i, a});
            enum_rec(l - a, n - a * i, i + 1, imax, fermi, cur, out);
            cur.pop_back();
        }
}

std::vector<Monomial> enumerate_weight_degree(Kind k, int l, int n)
{
    std::vector<std::pair<int, int>> cur;
    std::vector<Monomial> out;
    enum_rec(l, n, -4, 4, k == Kind::fermionic, cur, out);
    return out;
}

QSeries random_coeff(Xorshift64& r)
{
    if (r.range(0, 3) == 0) {
        int lo = r.range(-1, 1);
        return QSeries::dense(lo, {Rational(r.range(-3, 3)), Rational(r.range(1, 3))},
                              lo + r.range(2, 4));
    }
    return QSeries::monomial(Rational(r.range(1, 4)), r.range(0, 2));
}

AlgebraElement random_element(Xorshift64& r, Kind k, int l, int n)
{
    auto all = enumerate_weight_degree(k, l, n);
    AlgebraElement e(k, n, l);
    if (all.empty())
        return e;
    int cnt = r.range(1, 3);
    for (int t = 0; t < cnt; ++t)
        e.add_term(all[r.next() % all.size()], random_coeff(r));
    return e;
}

} // namespace

TEST_CASE("realization of monomials")
{
    // weight 1: a single variable raised to the index
    LaurentPoly p1 = psi(one_term(Kind::bosonic, Monomial{{{5, 1}}}, QSeries::constant(1)));
    CHECK(p1.arity() == 1);
    CHECK(p1.term_count() == 1);
    CHECK(p1.coeff({5}).coeff(0) == 1);

    // weight 2, distinct indices: both orderings appear
    LaurentPoly p2 = psi(one_term(Kind::bosonic, Monomial{{{2, 1}, {3, 1}}}, QSeries::constant(1)));
    CHECK(p2.term_count() == 2);
    CHECK(p2.coeff({2, 3}).coeff(0) == 1);
    CHECK(p2.coeff({3, 2}).coeff(0) == 1);

    // squared generator: the two permutations coincide
    LaurentPoly p3 = psi(one_term(Kind::bosonic, Monomial{{{3, 2}}}, QSeries::constant(1)));
    CHECK(p3.term_count() == 1);
    CHECK(p3.coeff({3, 3}).coeff(0) == 2);

    // weight 3 with a repeated index: each key counted with multiplicity
    LaurentPoly p4 = psi(one_term(Kind::bosonic, Monomial{{{1, 1}, {2, 2}}}, QSeries::constant(1)));
    CHECK(p4.term_count() == 3);
    CHECK(p4.coeff({1, 2, 2}).coeff(0) == 2);
    CHECK(p4.coeff({2, 1, 2}).coeff(0) == 2);
    CHECK(p4.coeff({2, 2, 1}).coeff(0) == 2);

    // coefficients ride along linearly
    QSeries c = QSeries::dense(0, {Rational(1), Rational(-1)}, 5);
    LaurentPoly p5 = psi(one_term(Kind::bosonic, Monomial{{{5, 1}}}, c));
    CHECK(p5.coeff({5}).first_difference(c) == std::nullopt);
    CHECK(p5.coeff({5}).hi() == 5);

    // antisymmetric realization signs
    LaurentPoly p6 = psi(one_term(Kind::fermionic, Monomial{{{1, 1}, {2, 1}}}, QSeries::constant(1)));
    CHECK(p6.coeff({1, 2}).coeff(0) == 1);
    CHECK(p6.coeff({2, 1}).coeff(0) == -1);

    LaurentPoly p7 = psi(one_term(Kind::fermionic,
                                  Monomial{{{0, 1}, {2, 1}, {5, 1}}}, QSeries::constant(1)));
    CHECK(p7.coeff({0, 2, 5}).coeff(0) == 1);
    CHECK(p7.coeff({5, 2, 0}).coeff(0) == -1);
    CHECK(p7.coeff({2, 5, 0}).coeff(0) == 1);

    // a squared generator is zero in the antisymmetric algebra
    AlgebraElement ferm_sq(Kind::fermionic, 6, 2);
    ferm_sq.add_term(Monomial{{{3, 2}}}, QSeries::constant(1));
    CHECK(ferm_sq.empty());
    CHECK(psi(ferm_sq).empty());

    // absent-monomial window carries through
    AlgebraElement win(Kind::bosonic, 3, 1, 4);
    win.add_term(Monomial{{{3, 1}}}, QSeries::dense(0, {Rational(1)}, 2));
    LaurentPoly pw = psi(win);
    CHECK(pw.qceil() == 4);
    CHECK(pw.coeff({3}).hi() == 2);
    CHECK(pw.coeff({7}).hi() == 4);
}

TEST_CASE("inverse realization")
{
    LaurentPoly p(2);
    p.add_term({1, 0}, QSeries::constant(1));
    p.add_term({0, 1}, QSeries::constant(1));
    AlgebraElement e = psi_inverse(p, Kind::bosonic);
    CHECK(e.terms().size() == 1);
    CHECK(e.coeff(Monomial{{{0, 1}, {1, 1}}}).coeff(0) == 1);
    CHECK(e.n() == 1);
    CHECK(e.l() == 2);

    // stabilizer of a doubled exponent has order two
    LaurentPoly p2(2);
    p2.add_term({3, 3}, QSeries::constant(2));
    AlgebraElement e2 = psi_inverse(p2, Kind::bosonic);
    CHECK(e2.terms().size() == 1);
    CHECK(e2.coeff(Monomial{{{3, 2}}}).coeff(0) == 1);

    LaurentPoly p3(2);
    p3.add_term({1, 2}, QSeries::constant(1));
    p3.add_term({2, 1}, QSeries::constant(-1));
    AlgebraElement e3 = psi_inverse(p3, Kind::fermionic);
    CHECK(e3.terms().size() == 1);
    CHECK(e3.coeff(Monomial{{{1, 1}, {2, 1}}}).coeff(0) == 1);

    // lopsided inputs are rejected
    LaurentPoly bad(2);
    bad.add_term({2, 1}, QSeries::constant(1));
    CHECK_THROWS_AS(psi_inverse(bad, Kind::bosonic), NotSymmetricError);

    LaurentPoly bad2(2);
    bad2.add_term({1, 0}, QSeries::constant(1));
    bad2.add_term({0, 1}, QSeries::constant(2));
    CHECK_THROWS_AS(psi_inverse(bad2, Kind::bosonic), NotSymmetricError);

    CHECK_THROWS_AS(psi_inverse(p, Kind::fermionic), NotAntisymmetricError);

    // diagonal content cannot be antisymmetric
    CHECK_THROWS_AS(psi_inverse(p2, Kind::fermionic), NotAntisymmetricError);

    // mixed z-degrees do not form a homogeneous element
    LaurentPoly inhom(2);
    inhom.add_term({1, 0}, QSeries::constant(1));
    inhom.add_term({0, 1}, QSeries::constant(1));
    inhom.add_term({1, 1}, QSeries::constant(1));
    CHECK_THROWS_AS(psi_inverse(inhom, Kind::bosonic), std::invalid_argument);
}

TEST_CASE("round trips")
{
    Xorshift64 rng;
    for (Kind k : {Kind::bosonic, Kind::fermionic}) {
        for (int trial = 0; trial < 40; ++trial) {
            int l = rng.range(1, 3);
            int n = rng.range(-3, 3);
            AlgebraElement e = random_element(rng, k, l, n);
            AlgebraElement back = psi_inverse(psi(e), k);
            CHECK(back == e);
        }
    }

    // polynomial-side round trip through the symmetrizer
    for (int trial = 0; trial < 25; ++trial) {
        int d = rng.range(-2, 3);
        LaurentPoly raw(2);
        for (int t = rng.range(1, 3); t > 0; --t) {
            int a = rng.range(-2, 3);
            raw.add_term({a, d - a}, random_coeff(rng));
        }
        LaurentPoly sym = raw.symmetrized(false);
        if (!sym.empty()) {
            LaurentPoly back = psi(psi_inverse(sym, Kind::bosonic));
            CHECK(back.first_difference(sym) == std::nullopt);
        }
        LaurentPoly alt = raw.symmetrized(true);
        if (!alt.empty()) {
            LaurentPoly back = psi(psi_inverse(alt, Kind::fermionic));
            CHECK(back.first_difference(alt) == std::nullopt);
        }
    }
}

TEST_CASE("element product")
{
    AlgebraElement x1 = one_term(Kind::bosonic, Monomial{{{1, 1}}},
                                 QSeries::dense(0, {Rational(1), Rational(-1)}, QSeries::kExactCeiling));
    AlgebraElement x2 = one_term(Kind::bosonic, Monomial{{{2, 1}}},
                                 QSeries::dense(0, {Rational(1), Rational(1)}, QSeries::kExactCeiling));

    AlgebraElement sq = x1 * x1;
    CHECK(sq.n() == 2);
    CHECK(sq.l() == 2);
    CHECK(sq.terms().size() == 1);
    CHECK(sq.coeff(Monomial{{{1, 2}}}).coeff(2) == 1);

    AlgebraElement prod = x1 * x2;
    CHECK(prod.coeff(Monomial{{{1, 1}, {2, 1}}}).coeff(0) == 1);
    CHECK(prod.coeff(Monomial{{{1, 1}, {2, 1}}}).coeff(1) == 0);
    CHECK(prod.coeff(Monomial{{{1, 1}, {2, 1}}}).coeff(2) == -1);

    AlgebraElement f1 = one_term(Kind::fermionic, Monomial{{{1, 1}}}, QSeries::constant(1));
    AlgebraElement f2 = one_term(Kind::fermionic, Monomial{{{2, 1}}}, QSeries::constant(1));
    CHECK((f2 * f1).coeff(Monomial{{{1, 1}, {2, 1}}}).coeff(0) == -1);
    CHECK((f1 * f2).coeff(Monomial{{{1, 1}, {2, 1}}}).coeff(0) == 1);
    CHECK((f1 * f1).empty());

    CHECK_THROWS_AS(x1 * f1, std::invalid_argument);

    AlgebraElement g(Kind::bosonic, 2, 1);
    CHECK_THROWS_AS(g.add_term(Monomial{{{1, 1}}}, QSeries::constant(1)), std::invalid_argument);
    CHECK_THROWS_AS(g.add_term(Monomial{{{2, 2}}}, QSeries::constant(1)), std::invalid_argument);
}

TEST_CASE("shuffle product")
{
    LaurentPoly f(1), g(1);
    f.add_term({1}, QSeries::constant(1));
    g.add_term({2}, QSeries::constant(1));

    LaurentPoly fg = product_fr1(f, g, Kind::bosonic);
    CHECK(fg.arity() == 2);
    CHECK(fg.term_count() == 2);
    CHECK(fg.coeff({1, 2}).coeff(0) == 1);
    CHECK(fg.coeff({2, 1}).coeff(0) == 1);

    // coinciding factors double up
    LaurentPoly h(1);
    h.add_term({0}, QSeries::constant(1));
    CHECK(product_fr1(h, h, Kind::bosonic).coeff({0, 0}).coeff(0) == 2);

    // arity 1 times arity 2: three insertions of the single variable
    LaurentPoly f4(1);
    f4.add_term({4}, QSeries::constant(1));
    LaurentPoly g2 = psi(one_term(Kind::bosonic, Monomial{{{1, 1}, {2, 1}}}, QSeries::constant(1)));
    LaurentPoly trip = product_fr1(f4, g2, Kind::bosonic);
    CHECK(trip.coeff({4, 1, 2}).coeff(0) == 1);
    CHECK(trip.coeff({1, 4, 2}).coeff(0) == 1);
    CHECK(trip.coeff({2, 1, 4}).coeff(0) == 1);
    LaurentPoly via_psi = psi(one_term(Kind::bosonic,
                                       Monomial{{{1, 1}, {2, 1}, {4, 1}}}, QSeries::constant(1)));
    CHECK(trip.first_difference(via_psi) == std::nullopt);

    // window of one factor caps the product's knowledge
    LaurentPoly fw(1);
    fw.add_term({1}, QSeries::dense(0, {Rational(1)}, 3));
    LaurentPoly capped = product_fr1(fw, g, Kind::bosonic);
    CHECK(capped.coeff({1, 2}).hi() == 3);

    // antisymmetric shuffles carry the shuffle sign
    LaurentPoly afg = product_fr1(f, g, Kind::fermionic);
    CHECK(afg.coeff({1, 2}).coeff(0) == 1);
    CHECK(afg.coeff({2, 1}).coeff(0) == -1);
    CHECK(product_fr1(f, f, Kind::fermionic).empty());
}

TEST_CASE("realization is an algebra homomorphism")
{
    Xorshift64 rng{0x1234567891011ull};
    for (Kind k : {Kind::bosonic, Kind::fermionic}) {
        int done = 0;
        while (done < 25) {
            int l1 = rng.range(1, 3), l2 = rng.range(1, 3);
            int n1 = rng.range(-3, 3), n2 = rng.range(-3, 3);
            AlgebraElement e1 = random_element(rng, k, l1, n1);
            AlgebraElement e2 = random_element(rng, k, l2, n2);
            if (e1.empty() || e2.empty())
                continue;
            ++done;
            AlgebraElement prod = e1 * e2;
            CHECK(prod.n() == n1 + n2);
            CHECK(prod.l() == l1 + l2);
            LaurentPoly lhs = psi(prod);
            LaurentPoly rhs = product_fr1(psi(e1), psi(e2), k);
            INFO("kind ", k == Kind::bosonic ? "bosonic" : "fermionic",
                 " grades (", n1, ",", l1, ") x (", n2, ",", l2, ")");
            CHECK(lhs.first_difference(rhs) == std::nullopt);
        }
    }
}

TEST_CASE("quadratic generator functions")
{
    // no corrections: just the two leading powers
    auto plain = generator_genfun({}, {1});
    REQUIRE(plain.size() == 1);
    LaurentPoly expect = psi(one_term(Kind::bosonic, Monomial{{{0, 1}, {1, 1}}}, QSeries::constant(1)));
    CHECK(plain[0].first_difference(expect) == std::nullopt);
    CHECK(plain[0].term_count() == 2);

    // zero shift folds the two leads onto one monomial
    auto folded = generator_genfun({{{0, 1}, QSeries::constant(3)}}, {0});
    CHECK(folded[0].coeff({0, 0}).coeff(0) == 2);
    CHECK(folded[0].coeff({-1, 1}).coeff(0) == 3);
    CHECK(folded[0].coeff({1, -1}).coeff(0) == 3);

    // two generators with separate correction tables
    auto pair = generator_genfun({{{0, 1}, QSeries::constant(1)}, {{1, 2}, QSeries::constant(5)}},
                                 {1, 2});
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].coeff({-1, 2}).coeff(0) == 1);
    CHECK(pair[1].coeff({2, 0}).coeff(0) == 1);
    CHECK(pair[1].coeff({0, 2}).coeff(0) == 1);
    CHECK(pair[1].coeff({-2, 4}).coeff(0) == 5);

    CHECK_THROWS_AS(generator_genfun({{{0, 0}, QSeries::constant(1)}}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(generator_genfun({{{1, 1}, QSeries::constant(1)}}, {1}), std::invalid_argument);

    // corrections drawn from the alternating quadratic relation reproduce
    // the theta-derived arity-2 series
    std::map<std::pair<int, int>, QSeries> u;
    u[{0, 2}] = QSeries::monomial(-1, 1);
    u[{0, 3}] = QSeries::monomial(-1, 2);
    u[{0, 5}] = QSeries::monomial(1, 5);
    u[{0, 6}] = QSeries::monomial(1, 7);
    LaurentPoly gen = generator_genfun(u, {1})[0];
    CHECK(gen.first_difference(f1_series(8)) == std::nullopt);
    CHECK(gen.term_count() == f1_series(8).term_count());

    // the same series read back as an element matches the explicit
    // alternating sum of index pairs
    AlgebraElement rel(Kind::bosonic, 1, 2);
    for (int a = -2; a <= 2; ++a) {
        Rational s = (a & 1) ? -1 : 1;
        int e = a * (3 * a - 1) / 2;
        std::vector<int> idx{3 * a, 1 - 3 * a};
        if (idx[0] > idx[1])
            std::swap(idx[0], idx[1]);
        rel.add_term(Monomial{{{idx[0], 1}, {idx[1], 1}}}, QSeries::monomial(s, e));
    }
    CHECK(psi(rel).first_difference(gen) == std::nullopt);

    // shifting every index multiplies the realization by (z1 z2)^i
    AlgebraElement e0 = psi_inverse(gen, Kind::bosonic);
    for (int i : {1, -2}) {
        AlgebraElement ei = e0.index_shifted(i);
        CHECK(ei.n() == e0.n() + 2 * i);
        LaurentPoly lhs = psi(ei);
        LaurentPoly rhs = gen.term_multiplied({i, i}, QSeries::constant(1));
        CHECK(lhs.first_difference(rhs) == std::nullopt);
    }
}

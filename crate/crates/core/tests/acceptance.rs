//! Acceptance suite. Run with
//! `cargo test -p sfcode-core --test acceptance -- --nocapture --test-threads=1`
//! to see one PASS/FAIL line per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sfcode_core::charsums::{
    affine_p_poly_sum, carlitz_scan, count_oracle, gauss_sum, quad_gauss_closed, weil_quadratic, LemmaId,
};
use sfcode_core::construct::{build_g, catalog, mds_conditions, oval_check, OvalFamily, OvalWitness, PolySpec};
use sfcode_core::lincode::{
    dual_min_distance_upto, dual_weight3_count, pless_dual_low_weights, weight_distribution, EnumOptions,
    LinearCode, DEFAULT_BUDGET,
};
use sfcode_core::subfield::{expand_subfield, same_code_set, subfield_code, trace_code, ADomain, Basis};
use sfcode_core::verify::{probe_conjecture, run_verification, Flag, TheoremId, VerificationReport};
use sfcode_core::{make_field, Elem, FiniteField};

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self, n: u32, name: &str, start: Instant, limit: Duration, detail: &str) {
        let elapsed = start.elapsed();
        let mut failures = self.failures;
        if elapsed > limit {
            failures.push(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
        let status = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {name}: {status} ({:.2}s) {detail}", elapsed.as_secs_f64());
        for f in &failures {
            println!("    {f}");
        }
        assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
    }
}

fn gf(p: u64, m: u32) -> Arc<FiniteField> {
    make_field(p, m).unwrap()
}

fn verify(out: &mut Outcome, t: TheoremId, p: u64, param: u32) -> VerificationReport {
    let r = run_verification(t, p, param, &EnumOptions::default()).unwrap();
    out.check(r.pass, format!("{t} p={p} param={param}: {}", r.to_json()));
    r
}

fn expect_params(out: &mut Outcome, r: &VerificationReport, code: (usize, usize, usize), dual: (usize, usize, usize)) {
    let got = r.params();
    out.check(
        got == (code.0, code.1, Some(code.2)),
        format!("{} p={} param={}: code {got:?}, expected {code:?}", r.theorem, r.p, r.param),
    );
    let gd = (r.dual.n, r.dual.k, r.dual.d);
    out.check(
        gd == (dual.0, dual.1, Some(dual.2)),
        format!("{} p={} param={}: dual {gd:?}, expected {dual:?}", r.theorem, r.p, r.param),
    );
}

fn catalog_functions(field: &Arc<FiniteField>) -> Vec<PolySpec> {
    let mut fs = vec![PolySpec::constant_one(field)];
    for t in 1..field.q() as u64 {
        fs.push(PolySpec::monomial(field, t).unwrap());
    }
    if field.p() == 2 {
        let m = field.m();
        let mut fams = vec![
            OvalFamily::Segre,
            OvalFamily::Glynn1,
            OvalFamily::Glynn2,
            OvalFamily::Glynn3,
            OvalFamily::Cherowitzo,
            OvalFamily::Payne,
            OvalFamily::Adelaide,
        ];
        fams.extend((1..m).map(|h| OvalFamily::Translation { h }));
        fams.extend((0..field.q() as u64 - 1).map(|a_log| OvalFamily::Subiaco { a_log }));
        for fam in fams {
            if let Ok(e) = catalog(&fam, field) {
                fs.push(e.poly);
            }
        }
    }
    fs
}

#[test]
fn criterion_01_mds_layer() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut tested = 0;
    for (p, m) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 5)] {
        let field = gf(p, m);
        let q = field.q() as u64;
        for f in catalog_functions(&field) {
            if !mds_conditions(&f).passed {
                continue;
            }
            tested += 1;
            let code = LinearCode::new(build_g(&f));
            let wd = weight_distribution(&code).unwrap();
            out.check(
                wd.nonzero_weights() == vec![(q as usize, q * q - 1)],
                format!("q={q} f={}: {}", f.label(), wd.enumerator_string()),
            );
            out.check(
                dual_min_distance_upto(&code, 3).exact() == Some(3),
                format!("q={q} f={}: dual distance is not 3", f.label()),
            );
        }
    }
    out.finish(1, "mds-layer", start, Duration::from_secs(10), &format!("{tested} functions"));
}

#[test]
fn criterion_02_constant_one() {
    let start = Instant::now();
    let mut out = Outcome::new();
    for (p, m) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2), (3, 3)] {
        let r = verify(&mut out, TheoremId::Thm5_1, p, m);
        let n = p.pow(m) as usize + 1;
        let d = (p as usize - 1) * p.pow(m - 1) as usize;
        expect_params(&mut out, &r, (n, m as usize + 1, d), (n, n - m as usize - 1, 3));
        out.check(r.flag(Flag::SpherePackingDimOptimalDual), format!("p={p} m={m}: dual not dimension-optimal"));
        out.check(r.flag(Flag::GriesmerNearlyOptimal), format!("p={p} m={m}: not Griesmer nearly optimal"));
    }
    let r = verify(&mut out, TheoremId::Thm5_1, 2, 2);
    expect_params(&mut out, &r, (5, 3, 2), (5, 2, 3));
    let r = verify(&mut out, TheoremId::Thm5_1, 2, 3);
    expect_params(&mut out, &r, (9, 4, 4), (9, 5, 3));
    let r = verify(&mut out, TheoremId::Thm5_1, 3, 2);
    expect_params(&mut out, &r, (10, 3, 6), (10, 7, 3));
    out.check(
        r.computed.nonzero_weights() == vec![(6, 6), (7, 18), (9, 2)],
        "p=3 m=2 enumerator is not 1+6z^6+18z^7+2z^9",
    );
    out.finish(2, "constant-one", start, Duration::from_secs(5), "5 fields");
}

#[test]
fn criterion_03_norm_exponent() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let r = verify(&mut out, TheoremId::Thm6_4, 2, 2);
    expect_params(&mut out, &r, (17, 6, 6), (17, 11, 3));
    let r = verify(&mut out, TheoremId::Thm6_4, 2, 3);
    expect_params(&mut out, &r, (65, 9, 28), (65, 56, 3));
    let r = verify(&mut out, TheoremId::Thm6_4, 3, 2);
    expect_params(&mut out, &r, (82, 6, 51), (82, 76, 3));
    // the a-over-subfield trace form spans the same code
    for (p, l) in [(2u64, 2u32), (3, 2)] {
        let f = PolySpec::monomial(&gf(p, 2 * l), p.pow(l) + 1).unwrap();
        let a = subfield_code(&f).unwrap();
        let b = trace_code(&f, ADomain::Subfield(l)).unwrap();
        out.check(a.basis() == b.basis(), format!("p={p} l={l}: subfield-domain trace code differs"));
    }
    out.finish(3, "norm-exponent", start, Duration::from_secs(60), "(2,2) (2,3) (3,2)");
}

#[test]
fn criterion_04_square_odd_p() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let r = verify(&mut out, TheoremId::Thm6_7, 3, 3);
    expect_params(&mut out, &r, (28, 6, 15), (28, 22, 3));
    let r = verify(&mut out, TheoremId::Thm6_7, 5, 3);
    expect_params(&mut out, &r, (126, 6, 95), (126, 120, 3));
    out.finish(4, "square-odd-p", start, Duration::from_secs(120), "(3,3) (5,3)");
}

#[test]
fn criterion_05_cube_binary() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let r = verify(&mut out, TheoremId::Thm6_9, 2, 5);
    out.check(r.params() == (33, 10, Some(12)), format!("m=5: {:?}", r.params()));
    let r = verify(&mut out, TheoremId::Thm6_9, 2, 7);
    out.check(r.params() == (129, 14, Some(56)), format!("m=7: {:?}", r.params()));
    let r = verify(&mut out, TheoremId::Thm6_9, 2, 3);
    out.check(r.params() == (9, 6, Some(2)), format!("m=3: {:?}", r.params()));
    let mut weights = Vec::new();
    for m in [5, 7] {
        let probe = probe_conjecture(TheoremId::Conj1, m, &EnumOptions::default()).unwrap();
        let c = probe.conjecture.as_ref().unwrap();
        weights.push(format!("m={m}: {} weights, agrees={}", c.nonzero_weights, c.agrees()));
    }
    out.finish(5, "cube-binary", start, Duration::from_secs(30), &weights.join("; "));
}

#[test]
fn criterion_06_square_binary() {
    let start = Instant::now();
    let mut out = Outcome::new();
    for m in 2..=6u32 {
        let r = verify(&mut out, TheoremId::Thm7_4, 2, m);
        let n = (1usize << m) + 1;
        expect_params(&mut out, &r, (n, m as usize + 1, 2), (n, n - m as usize - 1, 3));
        out.check(r.flag(Flag::SpherePackingDimOptimalDual), format!("m={m}: dual not dimension-optimal"));
    }
    out.finish(6, "square-binary", start, Duration::from_secs(5), "m = 2..6");
}

#[test]
fn criterion_07_oval_catalog() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut checked = 0;
    for m in [3u32, 5, 7] {
        let field = gf(2, m);
        let mut fams = vec![
            OvalFamily::Segre,
            OvalFamily::Glynn1,
            OvalFamily::Glynn2,
            OvalFamily::Glynn3,
            OvalFamily::Cherowitzo,
            OvalFamily::Payne,
        ];
        fams.extend((1..m).map(|h| OvalFamily::Translation { h }));
        for fam in fams {
            match catalog(&fam, &field) {
                Ok(e) => {
                    checked += 1;
                    let r = oval_check(&e.poly).unwrap();
                    out.check(r.is_oval && r.normalized && !e.experimental, format!("m={m} {fam}: {r:?}"));
                }
                Err(sfcode_core::Error::NotApplicable { .. }) => {}
                Err(e) => out.check(false, format!("m={m} {fam}: {e}")),
            }
        }
        let id = oval_check(&PolySpec::monomial(&field, 1).unwrap()).unwrap();
        out.check(!id.is_oval && id.witness.is_some(), format!("m={m}: identity accepted"));
    }
    for m in [4u32, 6] {
        let r = oval_check(&PolySpec::monomial(&gf(2, m), 6).unwrap()).unwrap();
        out.check(
            !r.is_oval && matches!(r.witness, Some(OvalWitness::NotPermutation { .. } | OvalWitness::SlopeCollision { .. })),
            format!("m={m}: x^6 accepted"),
        );
        out.check(
            catalog(&OvalFamily::Segre, &gf(2, m)).is_err(),
            format!("m={m}: segre not rejected"),
        );
    }
    let f5 = gf(2, 5);
    let a_log = (0..31u64)
        .find(|&l| f5.abs_trace(f5.inv(f5.alpha_pow(l)).unwrap()) == Elem::ONE)
        .unwrap();
    let sub = catalog(&OvalFamily::Subiaco { a_log }, &f5).unwrap();
    let ade = catalog(&OvalFamily::Adelaide, &gf(2, 4)).unwrap();
    out.check(!sub.experimental, format!("subiaco m=5: {:?}", sub.notes));
    out.check(!ade.experimental, format!("adelaide m=4: {:?}", ade.notes));
    out.finish(
        7,
        "oval-catalog",
        start,
        Duration::from_secs(60),
        &format!("{checked} family instances; {} and {} validated", sub.poly.label(), ade.poly.label()),
    );
}

#[test]
fn criterion_08_character_sums() {
    let start = Instant::now();
    let mut out = Outcome::new();
    for p in [3u64, 5, 7] {
        for m in 1..=3u32 {
            let f = gf(p, m);
            let g = gauss_sum(&f, (f.q() as u64 - 1) / 2);
            let c = quad_gauss_closed(p, m).unwrap();
            out.check((g - c).norm() < 1e-6, format!("gauss p={p} m={m}: {g} vs {c}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (p, m) in [(3u64, 2u32), (5, 2), (7, 1), (3, 3), (2, 3), (2, 4), (2, 5)] {
        let f = gf(p, m);
        let q = f.q();
        for i in 0..100 {
            let b = Elem(rng.gen_range(1..q));
            let a1 = Elem(rng.gen_range(0..q));
            // every fourth even-q instance lands on the nonzero branch
            let a2 = if p == 2 && i % 4 == 0 {
                f.mul(b, f.mul(a1, a1))
            } else {
                Elem(rng.gen_range(1..q))
            };
            if a2.is_zero() {
                continue;
            }
            let a0 = Elem(rng.gen_range(0..q));
            let r = weil_quadratic(&f, b, a2, a1, a0).unwrap();
            out.check(r.agrees(), format!("weil p={p} m={m}: {r:?}"));
        }
    }
    for (p, m) in [(2u64, 4u32), (3, 3), (5, 2), (2, 5), (7, 2)] {
        let f = gf(p, m);
        let q = f.q();
        for _ in 0..50 {
            let r = rng.gen_range(0..=2usize);
            let coeffs: Vec<Elem> = (0..=r).map(|_| Elem(rng.gen_range(0..q))).collect();
            let a = Elem(rng.gen_range(0..q));
            let b = Elem(rng.gen_range(1..q));
            let res = affine_p_poly_sum(&f, &coeffs, a, b).unwrap();
            out.check(res.sums.agrees(), format!("affine p={p} m={m}: {res:?}"));
        }
    }
    let mut s11 = Vec::new();
    for m in [3u32, 5, 7] {
        let scan = carlitz_scan(&gf(2, m)).unwrap();
        out.check(scan.passed(), format!("carlitz m={m}: {scan:?}"));
        s11.push(format!("S(1,1)={} at m={m}", scan.s11));
    }
    out.finish(8, "character-sums", start, Duration::from_secs(30), &s11.join(", "));
}

#[test]
fn criterion_09_counting_oracles() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut n = 0;
    for (p, l) in [(2u64, 2u32), (3, 2), (2, 3)] {
        for lem in [LemmaId::Lem6_2, LemmaId::Lem6_3] {
            let r = count_oracle(lem, p, l, DEFAULT_BUDGET).unwrap();
            n += r.counts.len();
            out.check(r.matched, format!("{}", r.to_json()));
        }
    }
    for (p, m) in [(3u64, 3u32), (5, 3)] {
        for lem in [LemmaId::Lem6_5, LemmaId::Lem6_6] {
            let r = count_oracle(lem, p, m, DEFAULT_BUDGET).unwrap();
            n += r.counts.len();
            out.check(r.matched, format!("{}", r.to_json()));
        }
    }
    out.finish(9, "counting-oracles", start, Duration::from_secs(180), &format!("{n} counts"));
}

#[test]
fn criterion_10_structure() {
    let start = Instant::now();
    let mut out = Outcome::new();
    for (p, m) in [(2u64, 3u32), (2, 4), (3, 2)] {
        let field = gf(p, m);
        let fs = [
            PolySpec::constant_one(&field),
            PolySpec::monomial(&field, 2).unwrap(),
            PolySpec::monomial(&field, 3).unwrap(),
            PolySpec::monomial(&field, 6).unwrap(),
        ];
        for f in &fs {
            let expanded = subfield_code(f).unwrap();
            let traced = trace_code(f, ADomain::Full).unwrap();
            out.check(
                same_code_set(&expanded, &traced, DEFAULT_BUDGET).unwrap(),
                format!("p={p} m={m} {}: expansion and trace differ", f.label()),
            );
            let parent = LinearCode::new(build_g(f));
            for j in [1u64, 5] {
                let other = expand_subfield(&parent, &Basis::shifted(&field, j)).unwrap();
                out.check(
                    same_code_set(&expanded, &other, DEFAULT_BUDGET).unwrap(),
                    format!("p={p} m={m} {}: basis shift {j} changes the code", f.label()),
                );
            }
        }
    }
    let suites: Vec<(TheoremId, u64, u32)> = [(2u64, 2u32), (2, 3), (3, 2), (5, 2), (3, 3)]
        .into_iter()
        .map(|(p, m)| (TheoremId::Thm5_1, p, m))
        .chain([(2, 2), (2, 3), (3, 2)].into_iter().map(|(p, l)| (TheoremId::Thm6_4, p, l)))
        .chain([(3, 3), (5, 3)].into_iter().map(|(p, m)| (TheoremId::Thm6_7, p, m)))
        .chain((2..=6).map(|m| (TheoremId::Thm7_4, 2, m)))
        .collect();
    for (t, p, param) in &suites {
        let field = gf(*p, t.field_degree(*param));
        let e = t.exponent(*p, *param);
        let f = if e == 0 {
            PolySpec::constant_one(&field)
        } else {
            PolySpec::monomial(&field, e).unwrap()
        };
        let code = subfield_code(&f).unwrap();
        let wd = weight_distribution(&code).unwrap();
        let (_, _, a3) = pless_dual_low_weights(&wd).unwrap();
        let direct = dual_weight3_count(&code);
        out.check(a3 == direct, format!("{t} p={p} param={param}: moments {a3}, direct {direct}"));
    }
    out.finish(
        10,
        "structure",
        start,
        Duration::from_secs(60),
        &format!("12 equivalence cases, {} A3 checks", suites.len()),
    );
}

//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one pass/fail line; exits nonzero on failure.

mod common;

use std::collections::{BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{sign_of, Q};
use conic_zariski::covers::gf2::Gf2Vec;
use conic_zariski::covers::{
    build_cover, canonical_form, enumerate_pic2, equivalent, induced_gluing, induced_gluing_traced, salmon_check,
    BranchDivisor, GluingData, InducedOptions, NodalArrangement,
};
use conic_zariski::numeric::{certify_sign, poly_sqrt, CertNumber, CertPoly, Config, Sign};
use conic_zariski::poncelet::{
    census, default_bracket, find_periodic_pair, origin_at, trace, Degeneracy, NestedEllipseFamily, PonceletPair,
};
use conic_zariski::splitting::{comb_signature, splitting_type, MainTheorem, SplittingType, Verdict, BITANGENT_PAIRS};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn cfg() -> Config {
    Config::default()
}

fn two_conics(p: &PonceletPair) -> Arc<NodalArrangement> {
    Arc::new(NodalArrangement::two_conics(&p.c1, &p.c2, &cfg().tol).expect("transversal"))
}

fn bitangent_branch(p: &PonceletPair, i: usize, j: usize) -> BranchDivisor {
    BranchDivisor::new(vec![p.bitangents[i].line.clone(), p.bitangents[j].line.clone()])
}

fn within(t: Instant, limit: f64) -> Result<Duration, String> {
    let e = t.elapsed();
    if e.as_secs_f64() < limit {
        Ok(e)
    } else {
        Err(format!("took {:.2} s, limit {limit} s", e.as_secs_f64()))
    }
}

/// Sign-vector orbits under the flips, by enumerating all flip subsets.
fn brute_force_classes(a: &NodalArrangement) -> usize {
    let n = a.node_count();
    let rows = a.incidence_matrix();
    let mut minima = BTreeSet::new();
    for x in 0u64..(1 << n) {
        let v = Gf2Vec::from_index(x, n);
        let mut best: Option<Gf2Vec> = None;
        for mask in 0u64..(1 << rows.len()) {
            let mut w = v.clone();
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    w.xor_assign(r);
                }
            }
            if best.as_ref().map_or(true, |b| w < *b) {
                best = Some(w);
            }
        }
        minima.insert(best.unwrap());
    }
    minima.len()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for n in [4, 6] {
        let a = two_conics(common::pair(n));
        let classes = enumerate_pic2(&a);
        let brute = brute_force_classes(&a);
        ensure!(classes.len() == 8, "period {n}: {} classes", classes.len());
        ensure!(brute == 8, "period {n}: brute force finds {brute} orbits");
        parts.push(format!("n={n}: 8 classes"));
    }
    let e = within(t, 1.0)?;
    Ok(format!("{} (brute force agrees) in {:.2} s", parts.join(", "), e.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut max_prec = 0;
    for n in [4, 6] {
        let p = common::pair(n);
        let a = two_conics(p);
        let mut fs = Vec::new();
        for &(i, j) in &BITANGENT_PAIRS {
            let (g, prec) = induced_gluing_traced(&bitangent_branch(p, i, j), &a, &cfg(), &InducedOptions::default())
                .map_err(|e| format!("T{}+T{}: {e}", i + 1, j + 1))?;
            max_prec = max_prec.max(prec);
            let st = SplittingType::new(g.plus_count(), g.minus_count());
            ensure!(st == SplittingType::new(2, 2), "n={n} T{}+T{}: splitting {st}", i + 1, j + 1);
            common_accepted(st)?;
            fs.push(g);
        }
        let idx = |i: usize, j: usize| BITANGENT_PAIRS.iter().position(|&q| q == (i.min(j), i.max(j))).unwrap();
        for (x, y) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
            ensure!(
                equivalent(&fs[idx(x.0, x.1)], &fs[idx(y.0, y.1)]).unwrap(),
                "n={n}: F{}{} and F{}{} differ",
                x.0 + 1,
                x.1 + 1,
                y.0 + 1,
                y.1 + 1
            );
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                for k in (j + 1)..4 {
                    let tri = [idx(i, j), idx(j, k), idx(i, k)];
                    let classes: BTreeSet<Vec<bool>> = tri
                        .iter()
                        .map(|&x| canonical_form(&fs[x]).canonical.signs().bits().to_vec())
                        .collect();
                    ensure!(classes.len() == 3, "n={n}: triple {{{i},{j},{k}}} repeats a class");
                    for &x in &tri {
                        ensure!(!canonical_form(&fs[x]).is_trivial(), "n={n}: trivial bitangent class");
                    }
                }
            }
        }
    }
    ensure!(max_prec <= 256, "signs needed {max_prec} bits");
    let e = within(t, 10.0)?;
    Ok(format!(
        "n=4,6: all T_i+T_j split (2, 2), complementary classes agree, triples distinct; signs at {max_prec} bits; {:.2} s",
        e.as_secs_f64()
    ))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for n in [4, 6] {
        let s = salmon_check(&common::pair(n).bitangents, &cfg().tol);
        ensure!(
            s.certified_rank_five(),
            "n={n}: singular values {:?}, perturbation {:.3e}",
            s.singular_values,
            s.perturbation
        );
        parts.push(format!("n={n} sigma6/sigma1 {:.1e}", s.relative_smallest()));
    }
    let e = within(t, 1.0)?;
    Ok(format!("rank 5 certified ({}) in {:.2} s", parts.join(", "), e.as_secs_f64()))
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [4, 6] {
        let t = Instant::now();
        let c = cfg();
        let fam = NestedEllipseFamily::default();
        let br = default_bracket(&fam, n, &c.tol).map_err(|e| e.to_string())?;
        let pair = find_periodic_pair(n, &fam, br, c.tol.search, &c).map_err(|e| e.to_string())?.pair;
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let s: f64 = rng.gen_range(-3.0..3.0);
            let tr = trace(&pair, &origin_at(&pair, s).unwrap(), 2 * n + 2).map_err(|e| format!("n={n} t={s}: {e}"))?;
            ensure!(tr.period == Some(n), "n={n} t={s}: period {:?}", tr.period);
            ensure!(tr.closure_defect < 1e-10, "n={n} t={s}: defect {:.3e}", tr.closure_defect);
            worst = worst.max(tr.closure_defect);
        }
        let e = within(t, 5.0).map_err(|m| format!("n={n}: {m}"))?;
        parts.push(format!("n={n} worst defect {worst:.1e} ({:.2} s)", e.as_secs_f64()));
    }
    Ok(format!("10 random origins close: {}", parts.join(", ")))
}

fn criterion_5() -> Outcome {
    for n in [4, 6] {
        let c = census(common::pair(n)).map_err(|e| e.to_string())?;
        ensure!(c.count(Degeneracy::TwoBitangents) == 2, "n={n}: {} TwoBitangents", c.count(Degeneracy::TwoBitangents));
        ensure!(
            c.count(Degeneracy::TwoNodeTangents) == 2,
            "n={n}: {} TwoNodeTangents",
            c.count(Degeneracy::TwoNodeTangents)
        );
        for t in &c.transverses {
            let lines = t.lines();
            let mult: Vec<usize> = lines.iter().map(|l| lines.iter().filter(|m| m.distance(l) < 1e-8).count()).collect();
            let points = t.points();
            let pmult: Vec<usize> =
                points.iter().map(|p| points.iter().filter(|q| q.distance(p) < 1e-8).count()).collect();
            let (single, doubled) = match t.degeneracy {
                Degeneracy::TwoBitangents => (&mult, &pmult),
                _ => (&pmult, &mult),
            };
            ensure!(t.reflections.len() == 2, "n={n}: reflections {:?}", t.reflections);
            ensure!(
                single.iter().filter(|&&k| k == 1).count() == 2 && single.iter().all(|&k| k <= 2),
                "n={n} {:?}: multiplicities {single:?}",
                t.degeneracy
            );
            ensure!(doubled.iter().all(|&k| k == 2), "n={n} {:?}: multiplicities {doubled:?}", t.degeneracy);
        }
    }
    Ok("n=4,6: 2 TwoBitangents + 2 TwoNodeTangents, two reflections each, all other elements doubled".into())
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    for n in [4, 6] {
        let thm = common::theorem(n);
        let a = two_conics(&thm.pair);
        let bp = induced_gluing(&thm.transverse_branch(), &a, &cfg()).map_err(|e| e.to_string())?;
        for &(i, j) in &BITANGENT_PAIRS {
            let f = induced_gluing(&thm.bitangent_branch(i, j), &a, &cfg()).map_err(|e| e.to_string())?;
            let eq = equivalent(&bp, &f).unwrap();
            ensure!(
                eq == MainTheorem::is_paired(i, j),
                "n={n}: transverse class vs T{}+T{}: equivalent={eq}",
                i + 1,
                j + 1
            );
        }
    }
    let e = within(t, 10.0)?;
    Ok(format!(
        "n=4,6: transverse class equals the paired bitangent classes only ({:.2} s)",
        e.as_secs_f64()
    ))
}

fn common_accepted(st: SplittingType) -> Result<(), String> {
    ensure!(st.m1 + st.m2 == 4, "splitting {st} does not sum to 4");
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for n in [4, 6] {
        let t = Instant::now();
        let thm = MainTheorem::build(common::pair(n), &cfg()).map_err(|e| e.to_string())?;
        let tol = cfg().tol;
        let sigs: Vec<_> = thm
            .arrangements
            .iter()
            .map(|a| comb_signature(&a.components(), &tol))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure!(sigs.iter().all(|s| *s == sigs[0]), "m={}: signatures differ", n / 2);
        for (&(i, j), a) in BITANGENT_PAIRS.iter().zip(&thm.arrangements) {
            let st = splitting_type(&a.c1, &a.c2, &a.branch(), &cfg()).map_err(|e| e.to_string())?;
            common_accepted(st)?;
            let want = if MainTheorem::is_paired(i, j) { SplittingType::new(0, 4) } else { SplittingType::new(2, 2) };
            ensure!(st == want, "m={}: {} splits {st}", n / 2, a.id);
        }
        let certs = thm.certificates(&cfg()).map_err(|e| e.to_string())?;
        ensure!(certs.len() == 8, "{} certificates", certs.len());
        for c in &certs {
            ensure!(c.verdict == Verdict::ZariskiPair, "{}: {:?}", c.pair_id, c.verdict);
        }
        let e = within(t, 30.0).map_err(|m| format!("m={}: {m}", n / 2))?;
        parts.push(format!("m={} ({:.2} s)", n / 2, e.as_secs_f64()));
    }
    Ok(format!("equal signatures, (0, 4)/(2, 2) partition, 8 Zariski pairs: {}", parts.join(", ")))
}

/// Components of the cover by breadth-first search over the node gluings.
fn oracle_components(k: &GluingData) -> BTreeSet<Vec<(usize, bool)>> {
    let a = k.arrangement();
    let n = a.components().len();
    let id = |c: usize, plus: bool| 2 * c + usize::from(!plus);
    let mut adj = vec![Vec::new(); 2 * n];
    for (q, node) in a.nodes().iter().enumerate() {
        let [i, j] = node.components;
        let same = k.signs().get(q) == false;
        for plus in [true, false] {
            let (x, y) = (id(i, plus), id(j, if same { plus } else { !plus }));
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    let mut seen = vec![false; 2 * n];
    let mut out = BTreeSet::new();
    for s in 0..2 * n {
        if seen[s] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(x) = queue.pop_front() {
            comp.push((x / 2, x % 2 == 0));
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.insert(comp);
    }
    out
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let a = two_conics(common::pair(4));
    for class in enumerate_pic2(&a) {
        let cover = build_cover(&class.canonical);
        let got: BTreeSet<Vec<(usize, bool)>> = cover
            .connectivity
            .iter()
            .map(|c| {
                let mut v: Vec<_> = c.iter().map(|s| (s.component, s.plus)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let want = oracle_components(&class.canonical);
        ensure!(got == want, "class {}: components {got:?}, oracle {want:?}", class.canonical.to_text());
        ensure!(
            cover.is_connected() == !class.is_trivial(),
            "class {}: connected={}",
            class.canonical.to_text(),
            cover.is_connected()
        );
    }
    let e = within(t, 1.0)?;
    Ok(format!("8 classes match the search oracle, connected iff nontrivial ({:.2} s)", e.as_secs_f64()))
}

fn random_expression(rng: &mut ChaCha8Rng) -> (Vec<f64>, usize) {
    let kind = rng.gen_range(0..4);
    let mut v: Vec<f64> = (0..6).map(|_| rng.gen_range(-10.0..10.0)).collect();
    match kind {
        // a b - c d with c d close to a b
        0 => {
            v[3] = (v[0] * v[1] + rng.gen_range(-1e-12..1e-12)) / v[2];
        }
        // exact cancellation
        1 => {
            v[2] = v[1];
            v[3] = v[0];
        }
        _ => {}
    }
    (v, kind)
}

fn eval_ball(v: &[f64], p: usize) -> CertNumber {
    let x: Vec<CertNumber> = v.iter().map(|&a| CertNumber::from_f64(a, p)).collect();
    let ab = &x[0] * &x[1];
    let cd = &x[2] * &x[3];
    let q = x[4].try_div(&x[5]).expect("nonzero divisor");
    &(&ab - &cd) + &q.scale(1e-20)
}

fn eval_exact(v: &[f64]) -> Q {
    let x: Vec<Q> = v.iter().map(|&a| Q::real(a)).collect();
    let q = x[4].div(&x[5]).mul(&Q::real(1e-20));
    x[0].mul(&x[1]).sub(&x[2].mul(&x[3])).add(&q)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // poly_sqrt round trips
    for k in 0..1000 {
        let deg = rng.gen_range(1..5);
        let mut c: Vec<Complex64> =
            (0..=deg).map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
        if c[deg].norm() < 0.1 {
            c[deg] += 1.0;
        }
        let q = CertPoly::from_c64(&c, 128);
        let s = poly_sqrt(&q.mul(&q), 1e-12).map_err(|e| format!("square {k}: {e}"))?;
        let lead = c[deg];
        let sign = if lead.re > 0.0 || (lead.re == 0.0 && lead.im > 0.0) { 1.0 } else { -1.0 };
        for (a, b) in s.coeffs().iter().zip(&c) {
            ensure!(
                (a.mid() - b * sign).norm() < 1e-20 * (1.0 + b.norm()),
                "square {k}: coefficient {} vs {}",
                a.mid(),
                b * sign
            );
        }
    }
    // certify_sign against exact rational evaluation
    let c = Config::default().with_precision(64);
    let mut decided = 0;
    for k in 0..1000 {
        let (v, _) = random_expression(&mut rng);
        if v[5].abs() < 1e-3 {
            continue;
        }
        let exact = sign_of(&eval_exact(&v).re);
        let zero_tol = if k % 2 == 0 { 1e-12 } else { 1e-60 };
        let s = certify_sign(&|p: usize| eval_ball(&v, p), zero_tol, &c);
        let ok = match s {
            Sign::Positive => exact > 0,
            Sign::Negative => exact < 0,
            Sign::Zero => {
                let e = eval_exact(&v).re;
                let abs = if e < num_rational::BigRational::from_float(0.0).unwrap() { -e } else { e };
                abs <= num_rational::BigRational::from_float(zero_tol).unwrap()
            }
            Sign::Undecidable => true,
        };
        ensure!(ok, "expression {k} {v:?}: certified {s:?}, exact sign {exact}");
        if s != Sign::Undecidable {
            decided += 1;
        }
    }
    // every splitting computed by the construction sums to four
    let mut splittings = 0;
    for n in [4, 6] {
        let thm = common::theorem(n);
        for a in &thm.arrangements {
            common_accepted(splitting_type(&a.c1, &a.c2, &a.branch(), &cfg()).map_err(|e| e.to_string())?)?;
            splittings += 1;
        }
        for &(i, j) in &BITANGENT_PAIRS {
            common_accepted(
                splitting_type(&thm.pair.c1, &thm.pair.c2, &thm.bitangent_branch(i, j), &cfg())
                    .map_err(|e| e.to_string())?,
            )?;
            splittings += 1;
        }
    }
    Ok(format!(
        "1000 square roots recovered; {decided} of 1000 signs decided, none wrong; {splittings} splittings sum to 4"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Pic2 cardinality", criterion_1),
        ("two-bitangent example", criterion_2),
        ("Salmon rank", criterion_3),
        ("Poncelet closure", criterion_4),
        ("degenerate census", criterion_5),
        ("deformation lemma", criterion_6),
        ("main theorem m=2,3", criterion_7),
        ("cover oracle", criterion_8),
        ("numeric soundness", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match r {
            Ok(detail) => println!("criterion {} [{name}]: PASS: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

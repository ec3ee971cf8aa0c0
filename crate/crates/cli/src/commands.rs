//! Implementations of the subcommands.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use conic_zariski::covers::{
    build_cover, canonical_form, enumerate_pic2, equivalent, induced_gluing, salmon_check, GluingData,
    NodalArrangement,
};
use conic_zariski::geometry::{ProjLine, ProjPoint};
use conic_zariski::numeric::Config;
use conic_zariski::poncelet::{
    census, default_bracket, degenerate_pairing, find_periodic_pair, origin_at, trace, trace_from, Degeneracy,
    NestedEllipseFamily, PairFamily, PonceletPair, Transverse,
};
use conic_zariski::splitting::{comb_signature, splitting_type, MainTheorem, SplittingType, Verdict, BITANGENT_PAIRS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::CliError;
use crate::file::ArrangementFile;
use crate::pairfile::{pair_from_file, pair_to_file};
use crate::render::{render_svg, Scene};
use crate::report::{Format, Report};

/// Options shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Common {
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub precision: usize,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Common {
    pub fn config(&self) -> Config {
        let mut cfg = Config::default().with_precision(self.precision);
        if let Some(t) = self.tol {
            cfg.tol.search = t;
            cfg.tol.closure = cfg.tol.closure.max(1e3 * t);
        }
        cfg
    }

    fn report(&self, command: &str) -> Report {
        let cfg = self.config();
        Report::new(command, cfg.precision, cfg.tol)
    }
}

/// What a command produced: a report, or a document for standard output.
pub enum Output {
    Report(Report),
    Document(String),
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parse `lo,hi`.
pub fn parse_bracket(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("bracket {lo},{hi} is not an interval"));
    }
    Ok((lo, hi))
}

fn need_n(common: &Common) -> Result<usize, CliError> {
    match common.n {
        Some(n) if n >= 3 => Ok(n),
        Some(n) => Err(CliError::Usage(format!("--n must be at least 3, got {n}"))),
        None => Err(CliError::Usage("--n is required without --input".into())),
    }
}

/// The pair from `--input`, or found by searching with `--n`.
fn acquire_pair(common: &Common, report: &mut Report) -> Result<PonceletPair, CliError> {
    let cfg = common.config();
    if let Some(path) = &common.input {
        let f = ArrangementFile::parse(&read_file(path)?)?;
        let (pair, warnings) = pair_from_file(&f, &cfg.tol)?;
        for w in warnings {
            report.warn(w);
        }
        if let Some(n) = common.n {
            if n != pair.period {
                return Err(CliError::Usage(format!("--n {n} disagrees with period {} in the file", pair.period)));
            }
        }
        report.put("source", path.display().to_string());
        return Ok(pair);
    }
    let n = need_n(common)?;
    let fam = NestedEllipseFamily::default();
    let br = default_bracket(&fam, n, &cfg.tol)?;
    let found = find_periodic_pair(n, &fam, br, cfg.tol.search, &cfg)?;
    report.put("source", format!("search, {}", fam.describe()));
    report.put("parameter", found.parameter.re_f64());
    Ok(found.pair)
}

fn fmt_c(z: num_complex::Complex64) -> String {
    let z = num_complex::Complex64::new(clean(z.re), clean(z.im));
    if z.im == 0.0 {
        format!("{:.9}", z.re)
    } else {
        format!("{:.9}{:+.9}i", z.re, z.im)
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn fmt_point(p: &ProjPoint) -> String {
    let v = p.normalized().mid();
    format!("({} : {} : {})", fmt_c(v[0]), fmt_c(v[1]), fmt_c(v[2]))
}

fn fmt_line(l: &ProjLine) -> String {
    let v = l.normalized().mid();
    format!("[{} : {} : {}]", fmt_c(v[0]), fmt_c(v[1]), fmt_c(v[2]))
}

pub fn find_pair(
    common: &Common,
    bracket: Option<(f64, f64)>,
    family: NestedEllipseFamily,
) -> Result<Output, CliError> {
    let n = need_n(common)?;
    let cfg = common.config();
    let mut report = common.report("find-pair");
    let br = match bracket {
        Some(b) => b,
        None => default_bracket(&family, n, &cfg.tol)?,
    };
    let found = find_periodic_pair(n, &family, br, cfg.tol.search, &cfg)?;
    let mut pair = found.pair;
    let mut notes = Vec::new();
    if n % 2 == 0 {
        let pairing = degenerate_pairing(&pair)?;
        pair = pair.with_pairing(pairing.0);
        notes.push("bitangents relabeled so {T1, T2} and {T3, T4} share degenerate transverses".to_string());
    }
    let mut file = pair_to_file(&pair);
    file.meta.insert("family".into(), format!("k={} h={}", family.k, family.h));
    file.meta.insert("parameter".into(), found.parameter.to_literal());
    file.meta.insert("bracket".into(), format!("{},{}", br.0, br.1));
    let text = file.to_text();

    let Some(out) = &common.output else {
        return Ok(Output::Document(text));
    };
    write_file(out, &text)?;
    report.put("family", family.describe());
    report.put("bracket", [br.0, br.1]);
    report.put("parameter", found.parameter.re_f64());
    report.put("iterations", found.iterations);
    report.put("closure_defect", found.defect);
    report.put("validation_defect", found.validation_defect);
    for (i, nd) in pair.nodes.iter().enumerate() {
        report.put(&format!("N{}", i + 1), fmt_point(nd));
    }
    for (i, b) in pair.bitangents.iter().enumerate() {
        report.put(&format!("T{}", i + 1), fmt_line(&b.line));
    }
    if let Ok(c) = census(&pair) {
        report.put(
            "degenerate_transverses",
            json!({
                "two_bitangents": c.count(Degeneracy::TwoBitangents),
                "two_node_tangents": c.count(Degeneracy::TwoNodeTangents),
                "mixed": c.count(Degeneracy::Mixed),
            }),
        );
    }
    for note in notes {
        report.put("labels", note);
    }
    report.put("written", out.display().to_string());
    Ok(Output::Report(report))
}

/// Origin of a traced transverse.
#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    /// Random chart parameter from the seed.
    Generic,
    Chart(f64),
    /// Tangency point on `C1` of bitangent `k` (one-based).
    Bitangent(usize),
    Node(usize),
}

pub fn parse_origin(s: &str) -> Result<Origin, String> {
    if s == "generic" {
        return Ok(Origin::Generic);
    }
    let index = |v: &str| -> Result<usize, String> {
        match v.parse::<usize>() {
            Ok(k) if (1..=4).contains(&k) => Ok(k),
            _ => Err(format!("{v}: expected an index from 1 to 4")),
        }
    };
    if let Some(v) = s.strip_prefix("t=") {
        return v.parse().map(Origin::Chart).map_err(|e| format!("{v}: {e}"));
    }
    if let Some(v) = s.strip_prefix("bitangent:") {
        return index(v).map(Origin::Bitangent);
    }
    if let Some(v) = s.strip_prefix("node:") {
        return index(v).map(Origin::Node);
    }
    Err(format!("{s}: expected generic, t=<value>, bitangent:<k> or node:<k>"))
}

fn transverse_entries(report: &mut Report, t: &Transverse) {
    report.put("closed", t.closed);
    report.put("period", t.period);
    report.put("degeneracy", format!("{:?}", t.degeneracy));
    report.put("reflections", &t.reflections);
    report.put("closure_defect", t.closure_defect);
    let steps: Vec<_> = t
        .steps
        .iter()
        .map(|(p, l)| json!({"point": fmt_point(p), "line": fmt_line(l)}))
        .collect();
    let text = t
        .steps
        .iter()
        .enumerate()
        .map(|(k, (p, l))| format!("P{k} {}  L{k} {}", fmt_point(p), fmt_line(l)))
        .collect::<Vec<_>>()
        .join("\n");
    report.put_text("steps", steps, text);
}

pub fn trace_cmd(common: &Common, origin: &Origin) -> Result<Output, CliError> {
    let mut report = common.report("trace");
    let pair = acquire_pair(common, &mut report)?;
    let max = 2 * pair.period + 2;
    let t = match origin {
        Origin::Generic | Origin::Chart(_) => {
            let s = match origin {
                Origin::Chart(s) => *s,
                _ => ChaCha8Rng::seed_from_u64(common.seed).gen_range(-3.0..3.0),
            };
            report.put("origin", format!("chart parameter {s}"));
            trace(&pair, &origin_at(&pair, s)?, max)?
        }
        Origin::Bitangent(k) => {
            let b = &pair.bitangents[k - 1];
            report.put("origin", format!("tangency of T{k} on C1"));
            trace_from(&pair, &b.tangency[0], &b.line, max)?
        }
        Origin::Node(k) => {
            report.put("origin", format!("node N{k}"));
            trace(&pair, &pair.nodes[k - 1], max)?
        }
    };
    transverse_entries(&mut report, &t);
    Ok(Output::Report(report))
}

/// The pair with bitangents in paired order, and whether a stored pairing
/// agreed with the recomputed one.
fn paired(pair: PonceletPair) -> Result<(PonceletPair, Option<bool>), CliError> {
    let stored = pair.pairing;
    let p = degenerate_pairing(&pair)?;
    let agrees = stored.map(|s| s.iter().all(|q| p.is_paired(q[0], q[1])));
    Ok((pair.with_pairing(p.0), agrees))
}

fn need_even(pair: &PonceletPair) -> Result<(), CliError> {
    if pair.period % 2 != 0 || pair.period < 4 {
        return Err(CliError::Usage(format!(
            "this command needs an even period of at least 4, got {}",
            pair.period
        )));
    }
    Ok(())
}

fn label(i: usize, j: usize) -> String {
    format!("{}{}", i + 1, j + 1)
}

/// Gluing data of `T_i + T_j` for all six pairs.
fn bitangent_gluings(
    pair: &PonceletPair,
    a: &Arc<NodalArrangement>,
    cfg: &Config,
) -> Result<Vec<GluingData>, CliError> {
    BITANGENT_PAIRS
        .iter()
        .map(|&(i, j)| {
            let b = conic_zariski::covers::BranchDivisor::new(vec![
                pair.bitangents[i].line.clone(),
                pair.bitangents[j].line.clone(),
            ]);
            Ok(induced_gluing(&b, a, cfg)?)
        })
        .collect()
}

pub fn covers(common: &Common) -> Result<Output, CliError> {
    let cfg = common.config();
    let mut report = common.report("covers");
    let pair = acquire_pair(common, &mut report)?;
    need_even(&pair)?;
    let thm = MainTheorem::build(&pair, &cfg)?;
    let pair = &thm.pair;
    let a = Arc::new(NodalArrangement::two_conics(&pair.c1, &pair.c2, &cfg.tol)?);
    let classes = enumerate_pic2(&a);
    report.put("nodes", a.node_count());
    let list: Vec<_> = classes
        .iter()
        .map(|c| {
            let cover = build_cover(&c.canonical);
            json!({"class": c.canonical.to_text(), "connected": cover.is_connected(), "sheets": cover.partition_sizes()})
        })
        .collect();
    let text = list
        .iter()
        .map(|v| format!("{} connected {} sheets {}", v["class"].as_str().unwrap(), v["connected"], v["sheets"]))
        .collect::<Vec<_>>()
        .join("\n");
    report.put_text("pic2_classes", list, text);

    let fs = bitangent_gluings(pair, &a, &cfg)?;
    let bp = induced_gluing(&thm.transverse_branch(), &a, &cfg)?;
    let mut rows = Vec::new();
    for (&(i, j), f) in BITANGENT_PAIRS.iter().zip(&fs) {
        rows.push(json!({
            "branch": format!("T{}+T{}", i + 1, j + 1),
            "gluing": f.to_text(),
            "class": canonical_form(f).canonical.to_text(),
            "paired": MainTheorem::is_paired(i, j),
            "matches_transverse": equivalent(&bp, f)?,
        }));
    }
    let text = rows
        .iter()
        .map(|r| {
            format!(
                "F{} {} class {}{}",
                &r["branch"].as_str().unwrap().replace(['T', '+'], ""),
                r["gluing"].as_str().unwrap(),
                r["class"].as_str().unwrap(),
                if r["matches_transverse"].as_bool().unwrap() { "  ~ transverse" } else { "" }
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    report.put_text("bitangent_gluings", rows, text);
    report.put("transverse_gluing", bp.to_text());
    report.put("transverse_class", canonical_form(&bp).canonical.to_text());
    Ok(Output::Report(report))
}

pub fn splitting(common: &Common) -> Result<Output, CliError> {
    let cfg = common.config();
    let mut report = common.report("splitting");
    let pair = acquire_pair(common, &mut report)?;
    need_even(&pair)?;
    let thm = MainTheorem::build(&pair, &cfg)?;
    report.put("m", thm.m());
    for arr in &thm.arrangements {
        let st = splitting_type(&arr.c1, &arr.c2, &arr.branch(), &cfg)?;
        report.put(&format!("splitting {}", arr.id), st.to_string());
    }
    let certs = thm.certificates(&cfg)?;
    for c in &certs {
        report.put_text(&format!("certificate {}", c.pair_id), c, c.to_text());
    }
    Ok(Output::Report(report))
}

fn run_check(report: &mut Report, name: &str, f: impl FnOnce() -> Result<(bool, String), CliError>) -> bool {
    match f() {
        Ok((ok, detail)) => {
            report.check(name, ok, detail);
            ok
        }
        Err(e) => {
            report.check(name, false, format!("error: {e}"));
            false
        }
    }
}

pub fn verify(common: &Common) -> Result<Output, CliError> {
    let cfg = common.config();
    let tol = cfg.tol;
    let mut report = common.report("verify");
    let pair = acquire_pair(common, &mut report)?;
    need_even(&pair)?;
    let n = pair.period;

    run_check(&mut report, "closure", || {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let s: f64 = rng.gen_range(-3.0..3.0);
            let t = trace(&pair, &origin_at(&pair, s)?, 2 * n + 2)?;
            if t.period != Some(n) || t.closure_defect >= tol.closure {
                return Ok((false, format!("origin t = {s}: period {:?}, defect {:.3e}", t.period, t.closure_defect)));
            }
            worst = worst.max(t.closure_defect);
        }
        Ok((true, format!("10 random origins close with period {n}, worst defect {worst:.3e}")))
    });

    let paired_pair = match paired(pair.clone()) {
        Ok((p, agrees)) => {
            let ok = agrees != Some(false);
            report.check(
                "pairing",
                ok,
                match agrees {
                    Some(true) => "stored pairing matches the degenerate transverses",
                    Some(false) => "stored pairing differs from the degenerate transverses",
                    None => "pairing recomputed from the degenerate transverses",
                },
            );
            Some(p)
        }
        Err(e) => {
            report.check("pairing", false, format!("error: {e}"));
            None
        }
    };
    let pp = paired_pair.as_ref().unwrap_or(&pair);
    let a = NodalArrangement::two_conics(&pp.c1, &pp.c2, &tol).map(Arc::new);

    run_check(&mut report, "pic2", || {
        let a = a.clone()?;
        let classes = enumerate_pic2(&a);
        // brute force over all sign vectors
        let mut seen: Vec<Vec<bool>> = Vec::new();
        for x in 0u64..(1 << a.node_count()) {
            let k = GluingData::new(a.clone(), conic_zariski::covers::gf2::Gf2Vec::from_index(x, a.node_count()))?;
            let c = canonical_form(&k).canonical.signs().bits().to_vec();
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        Ok((
            classes.len() == 8 && seen.len() == 8,
            format!("{} classes, {} by brute force", classes.len(), seen.len()),
        ))
    });

    let fs = a.clone().map_err(CliError::from).and_then(|a| bitangent_gluings(pp, &a, &cfg));
    run_check(&mut report, "bitangent_splitting", || {
        let fs = fs.as_ref().map_err(|e| CliError::Usage(e.to_string()))?;
        let types: Vec<SplittingType> = fs.iter().map(|f| SplittingType::new(f.plus_count(), f.minus_count())).collect();
        let ok = types.iter().all(|t| *t == SplittingType::new(2, 2));
        let detail = BITANGENT_PAIRS
            .iter()
            .zip(&types)
            .map(|(&(i, j), t)| format!("T{}+T{} {t}", i + 1, j + 1))
            .collect::<Vec<_>>()
            .join(", ");
        Ok((ok, detail))
    });

    run_check(&mut report, "bitangent_classes", || {
        let fs = fs.as_ref().map_err(|e| CliError::Usage(e.to_string()))?;
        // complementary pairs (12, 34), (13, 24), (14, 23) by index
        let comp = [(0, 5), (1, 4), (2, 3)];
        let mut ok = true;
        for &(x, y) in &comp {
            ok &= equivalent(&fs[x], &fs[y])?;
            ok &= !canonical_form(&fs[x]).is_trivial();
        }
        for (p, &(x, _)) in comp.iter().enumerate() {
            for &(y, _) in &comp[p + 1..] {
                ok &= !equivalent(&fs[x], &fs[y])?;
            }
        }
        let detail = comp
            .iter()
            .map(|&(x, y)| {
                let (i, j) = BITANGENT_PAIRS[x];
                let (k, l) = BITANGENT_PAIRS[y];
                format!("F{} ~ F{} {}", label(i, j), label(k, l), canonical_form(&fs[x]).canonical.to_text())
            })
            .collect::<Vec<_>>()
            .join(", ");
        Ok((ok, detail))
    });

    run_check(&mut report, "salmon", || {
        let s = salmon_check(&pp.bitangents, &tol);
        Ok((
            s.certified_rank_five(),
            format!(
                "relative sixth singular value {:.3e}, perturbation {:.3e}",
                s.relative_smallest(),
                s.perturbation
            ),
        ))
    });

    let thm = MainTheorem::build(pp, &cfg).map_err(CliError::from);
    run_check(&mut report, "transverse_cover", || {
        let thm = thm.as_ref().map_err(|e| CliError::Usage(e.to_string()))?;
        let a = a.clone()?;
        let bp = induced_gluing(&thm.transverse_branch(), &a, &cfg)?;
        let fs = fs.as_ref().map_err(|e| CliError::Usage(e.to_string()))?;
        let mut ok = true;
        let mut matches = Vec::new();
        for (&(i, j), f) in BITANGENT_PAIRS.iter().zip(fs) {
            let e = equivalent(&bp, f)?;
            ok &= e == MainTheorem::is_paired(i, j);
            if e {
                matches.push(format!("F{}", label(i, j)));
            }
        }
        Ok((ok, format!("transverse gluing {} equivalent to {}", bp.to_text(), matches.join(", "))))
    });

    run_check(&mut report, "combinatorics", || {
        let thm = thm.as_ref().map_err(|e| CliError::Usage(e.to_string()))?;
        let audit = thm.lemma_audit(&cfg);
        let sigs = thm
            .arrangements
            .iter()
            .map(|a| comb_signature(&a.components(), &tol))
            .collect::<Result<Vec<_>, _>>()?;
        let equal = sigs.iter().all(|s| *s == sigs[0]);
        Ok((
            equal && audit.holds(),
            format!("six signatures equal: {equal}; incidence audit holds: {}; {}", audit.holds(), sigs[0].summary()),
        ))
    });

    run_check(&mut report, "splitting_types", || {
        let thm = thm.as_ref().map_err(|e| CliError::Usage(e.to_string()))?;
        let mut ok = true;
        let mut parts = Vec::new();
        for (&(i, j), arr) in BITANGENT_PAIRS.iter().zip(&thm.arrangements) {
            let st = splitting_type(&arr.c1, &arr.c2, &arr.branch(), &cfg)?;
            let want = if MainTheorem::is_paired(i, j) {
                SplittingType::new(0, 4)
            } else {
                SplittingType::new(2, 2)
            };
            ok &= st == want;
            parts.push(format!("{} {st}", arr.id));
        }
        Ok((ok, parts.join(", ")))
    });

    run_check(&mut report, "zariski_pairs", || {
        let thm = thm.as_ref().map_err(|e| CliError::Usage(e.to_string()))?;
        let certs = thm.certificates(&cfg)?;
        let good = certs.iter().filter(|c| c.verdict == Verdict::ZariskiPair).count();
        Ok((good == certs.len() && good == 8, format!("{good} of {} certificates are Zariski pairs", certs.len())))
    });

    Ok(Output::Report(report))
}

/// What to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum What {
    /// Conics, nodes, bitangents and a generic transverse.
    Arrangement,
    /// Conics and a generic transverse with its vertices.
    Transverse,
    /// Conics and the degenerate transverses.
    Degenerate,
}

pub fn render(common: &Common, what: What) -> Result<(Output, Vec<String>), CliError> {
    let cfg = common.config();
    let mut report = common.report("render");
    let pair = acquire_pair(common, &mut report)?;
    let mut scene = Scene {
        conics: vec![("C1".into(), pair.c1.clone()), ("C2".into(), pair.c2.clone())],
        ..Scene::default()
    };
    let generic = || -> Result<Transverse, CliError> {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        let mut last = None;
        for _ in 0..8 {
            let s: f64 = rng.gen_range(-3.0..3.0);
            let t = trace(&pair, &origin_at(&pair, s)?, 2 * pair.period + 2)?;
            if t.degeneracy == Degeneracy::NonDegenerate && t.closed {
                return Ok(t);
            }
            last = Some(t);
        }
        Ok(last.expect("eight attempts"))
    };
    match what {
        What::Arrangement | What::Transverse => {
            let t = generic()?;
            for (k, (p, l)) in t.steps.iter().take(pair.period).enumerate() {
                scene.lines.push((format!("L{}", k + 1), l.clone()));
                scene.points.push((format!("P{}", k + 1), p.clone()));
            }
            if what == What::Arrangement {
                for (i, nd) in pair.nodes.iter().enumerate() {
                    scene.points.push((format!("N{}", i + 1), nd.clone()));
                }
                for (i, b) in pair.bitangents.iter().enumerate() {
                    scene.lines.push((format!("T{}", i + 1), b.line.clone()));
                }
            }
        }
        What::Degenerate => {
            let c = census(&pair)?;
            for (k, t) in c.transverses.iter().enumerate() {
                for (j, l) in t.distinct_lines(1e-8).into_iter().enumerate() {
                    scene.lines.push((format!("D{}.{}", k + 1, j + 1), l));
                }
            }
        }
    }
    let r = render_svg(&scene, &cfg.tol);
    match &common.output {
        Some(out) => {
            write_file(out, &r.svg)?;
            report.put("written", out.display().to_string());
            report.put("omitted", r.omitted.len());
            Ok((Output::Report(report), r.omitted))
        }
        None => Ok((Output::Document(r.svg), r.omitted)),
    }
}

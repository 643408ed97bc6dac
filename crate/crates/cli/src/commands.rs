use std::fmt::Write as _;
use std::path::Path;

use meshdist::bijections::{self, Map};
use meshdist::cache::Cache;
use meshdist::catalog::{self, Catalog, Seed, CONJECTURED_CLASSES};
use meshdist::distribution::{DistributionTable, Scanner};
use meshdist::series::{self, GfKey, Mode};
use meshdist::{formulas, list_occurrences, verify, MeshPattern, Permutation};
use serde::Serialize;
use serde_json::{json, Value};

use crate::Command;

/// Version of every JSON payload; bump on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] meshdist::Error),
    #[error("{0}")]
    Usage(String),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

pub struct Output {
    pub stdout: String,
    /// False when the computation ran but a checked property failed.
    pub ok: bool,
}

fn done(stdout: String) -> Result<Output, CliError> {
    Ok(Output { stdout, ok: true })
}

fn envelope(command: &str, payload: impl Serialize) -> String {
    let mut v = serde_json::to_value(payload).expect("payload serializes");
    let obj = v.as_object_mut().expect("payloads are objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn pattern(s: &str) -> Result<MeshPattern, CliError> {
    Ok(s.parse::<MeshPattern>().map_err(meshdist::Error::from)?)
}

fn perm(s: &str) -> Result<Permutation, CliError> {
    Ok(s.parse::<Permutation>().map_err(meshdist::Error::from)?)
}

fn load_seed(path: Option<&Path>) -> Result<Seed, CliError> {
    match path {
        None => Ok(Seed::builtin()),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            Ok(Seed::from_json(&text)?)
        }
    }
}

fn trimmed(row: &[u64]) -> Vec<u64> {
    let mut v = row.to_vec();
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Distribution table through the on-disk cache when `MESHDIST_CACHE_DIR` is set.
fn cached_distribution(p: &MeshPattern, depth: usize) -> Result<DistributionTable, CliError> {
    let scanner = Scanner::default();
    scanner.check(depth)?;
    let Some(cache) = Cache::from_env() else {
        return Ok(scanner.distribution(p, depth)?);
    };
    if let Some(t) = cache.get(p, depth)? {
        return Ok(t);
    }
    let t = scanner.distribution(p, depth)?;
    cache.put(&t)?;
    Ok(t)
}

pub fn run(cmd: Command, json: bool) -> Result<Output, CliError> {
    match cmd {
        Command::Count { pattern: p, perm: pi, list } => count(&pattern(&p)?, &perm(&pi)?, list, json),
        Command::Distribution { pattern: p, depth } => distribution(&pattern(&p)?, depth, json),
        Command::Avoidance { pattern: p, depth } => avoidance(&pattern(&p)?, depth, json),
        Command::Joint { first, second, depth } => joint(&pattern(&first)?, &pattern(&second)?, depth, json),
        Command::Classify { depth, classes } => classify(depth, classes.as_deref(), json),
        Command::Wilf { depth, classes } => wilf(depth, classes.as_deref(), json),
        Command::Orbit { pattern: p } => orbit(&pattern(&p)?, json),
        Command::VerifyFormulas { depth, class } => verify_formulas(depth, class, json),
        Command::VerifyGf { depth } => verify_gf(depth, json),
        Command::VerifyBijections { name, depth, involution_depth, inject_fault } => {
            verify_bijections(name.as_deref(), involution_depth.unwrap_or(depth), depth, inject_fault, json)
        }
        Command::VerifyConjectures { depth, class } => verify_conjectures(depth, class, json),
        Command::Series { gf, order, mode } => series_cmd(&gf, order, mode.as_deref(), json),
        Command::Bijection { name, perm: pi } => bijection(&name, &perm(&pi)?, json),
        Command::RegenAppendix { depth } => regen_appendix(depth, json),
    }
}

fn count(p: &MeshPattern, pi: &Permutation, list: bool, json: bool) -> Result<Output, CliError> {
    let occ = list_occurrences(p, pi);
    if json {
        let mut v = json!({"pattern": p.to_string(), "perm": pi.to_string(), "count": occ.len()});
        if list {
            v["occurrences"] = json!(occ);
        }
        return done(envelope("count", v));
    }
    let mut s = format!("{}\n", occ.len());
    if list {
        for w in &occ {
            writeln!(s, "{}", join(w)).unwrap();
        }
    }
    done(s)
}

fn distribution(p: &MeshPattern, depth: usize, json: bool) -> Result<Output, CliError> {
    let t = cached_distribution(p, depth)?;
    let rows: Vec<Vec<u64>> = t.rows.iter().map(|r| trimmed(r)).collect();
    if json {
        let v = json!({
            "pattern": p.to_string(),
            "depth": depth,
            "rows": rows,
            "signature": t.signature().digest(),
        });
        return done(envelope("distribution", v));
    }
    let mut s = String::new();
    for (n, r) in rows.iter().enumerate() {
        writeln!(s, "n={n}: {}", join(r)).unwrap();
    }
    done(s)
}

fn avoidance(p: &MeshPattern, depth: usize, json: bool) -> Result<Output, CliError> {
    let values = cached_distribution(p, depth)?.avoidance().values;
    if json {
        return done(envelope("avoidance", json!({"pattern": p.to_string(), "depth": depth, "values": values})));
    }
    done(format!("{}\n", join(&values)))
}

fn joint(a: &MeshPattern, b: &MeshPattern, depth: usize, json: bool) -> Result<Output, CliError> {
    let j = Scanner::default().joint(a, b, depth)?;
    if json {
        let v = json!({
            "first": a.to_string(),
            "second": b.to_string(),
            "depth": depth,
            "mats": j.mats,
            "symmetric": j.is_symmetric(),
            "diagonal": j.is_diagonal(),
        });
        return done(envelope("joint", v));
    }
    let mut s = String::new();
    for (n, m) in j.mats.iter().enumerate() {
        writeln!(s, "n={n}:").unwrap();
        for row in m {
            writeln!(s, "  {}", join(row)).unwrap();
        }
    }
    writeln!(s, "symmetric: {}", j.is_symmetric()).unwrap();
    done(s)
}

fn classify(depth: usize, classes: Option<&Path>, json: bool) -> Result<Output, CliError> {
    let seed = load_seed(classes)?;
    let r = Catalog::build(depth)?.classify_with_seed(&seed)?;
    if json {
        return done(envelope("classify", &r));
    }
    let mut s = format!(
        "depth: {}\ndistribution classes: {}\navoidance classes: {}\n",
        r.depth, r.distribution_classes, r.avoidance_classes
    );
    if let Some(b) = r.proven_blocks {
        writeln!(s, "proven blocks: {b}").unwrap();
    }
    for c in &r.classes {
        let id = c.class_id.map_or("-".to_string(), |i| i.to_string());
        writeln!(s, "{id}\t{}\t{}\t{}", c.representative, c.members.len(), &c.digest[..16]).unwrap();
    }
    for d in &r.discrepancies {
        writeln!(s, "discrepancy: {d}").unwrap();
    }
    done(s)
}

fn wilf(depth: usize, classes: Option<&Path>, json: bool) -> Result<Output, CliError> {
    let seed = load_seed(classes)?;
    let w = Catalog::build(depth)?.wilf_classify(&seed)?;
    if json {
        return done(envelope("wilf", &w));
    }
    done(format!(
        "depth: {}\nobserved avoidance classes: {}\nafter proven merges: {}\npending conjectures: {}\nformula-backed components: {}\n",
        w.depth,
        w.observed,
        w.proven_merge,
        join(&w.pending),
        w.formula_backed
    ))
}

fn orbit(p: &MeshPattern, json: bool) -> Result<Output, CliError> {
    let orbit: Vec<String> = p.symmetry_orbit().iter().map(|q| q.to_string()).collect();
    if json {
        return done(envelope("orbit", json!({"pattern": p.to_string(), "orbit": orbit})));
    }
    done(orbit.iter().map(|q| format!("{q}\n")).collect())
}

fn verify_formulas(depth: usize, class: Option<u32>, json: bool) -> Result<Output, CliError> {
    let seed = Seed::builtin();
    let cat = Catalog::build(depth)?;
    let mut results = verify::verify_formulas(&cat, &seed)?;
    if let Some(c) = class {
        results.retain(|r| r.formula.class_id == c);
        if results.is_empty() {
            let status = seed.class(c).map_or("unknown".to_string(), |s| s.status.clone());
            return Err(meshdist::Error::NoFormula { class_id: c, status }.into());
        }
    }
    let ok = results.iter().all(|r| r.verified || r.formula.as_printed);
    let stdout = if json {
        let unregistered: Vec<Value> =
            formulas::unregistered_notes().iter().map(|(c, why)| json!({"class_id": c, "note": why})).collect();
        envelope("verify-formulas", json!({"depth": depth, "results": results, "unregistered": unregistered}))
    } else {
        let mut s = String::new();
        for r in &results {
            let verdict = match (r.verified, r.formula.as_printed) {
                (true, _) => "PASS",
                (false, true) => "REFUTED (as printed)",
                (false, false) => "FAIL",
            };
            writeln!(s, "{verdict}\tclass {}\t{}\t{}", r.formula.class_id, r.formula.evaluator, r.formula.source)
                .unwrap();
            if let Some(m) = &r.mismatch {
                writeln!(s, "\t{m}").unwrap();
            }
        }
        s
    };
    Ok(Output { stdout, ok })
}

fn verify_gf(depth: usize, json: bool) -> Result<Output, CliError> {
    let seed = Seed::builtin();
    let cat = Catalog::build(depth)?;
    let results = verify::verify_gfs(&cat, &seed)?;
    let printed = verify::verify_printed_gfs(&cat, &seed)?;
    let ok = results.iter().all(|r| r.verified);
    let stdout = if json {
        envelope("verify-gf", json!({"depth": depth, "results": results, "as_printed": printed}))
    } else {
        let mut s = String::new();
        for r in &results {
            writeln!(s, "{}\t{}\t{}", if r.verified { "PASS" } else { "FAIL" }, r.key, r.mode).unwrap();
            if let Some(m) = &r.mismatch {
                writeln!(s, "\t{m}").unwrap();
            }
        }
        for r in &printed {
            let verdict = if r.verified { "PASS (as printed)" } else { "REFUTED (as printed)" };
            writeln!(s, "{verdict}\t{}\t{}", r.key, r.mode).unwrap();
            if let Some(m) = &r.mismatch {
                writeln!(s, "\t{m}").unwrap();
            }
        }
        s
    };
    Ok(Output { stdout, ok })
}

const LEMMA_MAPS: [&str; 2] = ["keep-max-complement", "keep-max-reverse-left"];

fn verify_bijections(
    name: Option<&str>,
    inv_depth: usize,
    swap_depth: usize,
    inject_fault: bool,
    json: bool,
) -> Result<Output, CliError> {
    let scanner = Scanner::default();
    scanner.check(inv_depth.max(swap_depth))?;
    let specs: Vec<_> = bijections::catalog().into_iter().filter(|b| name.is_none_or(|n| n == b.name)).collect();
    let lemma: Vec<&str> = LEMMA_MAPS.iter().copied().filter(|m| name.is_none_or(|n| n == *m)).collect();
    if specs.is_empty() && lemma.is_empty() {
        return Err(meshdist::Error::UnknownBijection(name.unwrap_or_default().to_string()).into());
    }
    if inject_fault && !lemma.is_empty() && name.is_some() {
        return Err(CliError::Usage("--inject-fault applies to the named bijections only".into()));
    }

    let results: Vec<_> = specs
        .iter()
        .map(|spec| {
            if inject_fault {
                let f = spec.map;
                let faulty = move |pi: &[usize]| {
                    let mut out = f(pi);
                    if pi.len() >= 3 && pi.iter().enumerate().all(|(i, &v)| v == i + 1) {
                        out.swap(0, 1);
                    }
                    out
                };
                verify::verify_bijection_with(spec, faulty, inv_depth, swap_depth)
            } else {
                verify::verify_bijection(spec, inv_depth, swap_depth)
            }
        })
        .collect();
    let lemma_results: Vec<_> = if lemma.is_empty() {
        Vec::new()
    } else {
        verify::verify_lemma_maps(inv_depth, swap_depth)
            .into_iter()
            .filter(|l| lemma.contains(&l.map.as_str()))
            .collect()
    };
    let ok = results.iter().all(|r| r.pass()) && lemma_results.iter().all(|l| l.failures.is_empty());

    let stdout = if json {
        envelope(
            "verify-bijections",
            json!({
                "involution_depth": inv_depth,
                "swap_depth": swap_depth,
                "fault_injected": inject_fault,
                "results": results,
                "lemma_maps": lemma_results,
            }),
        )
    } else {
        let mut s = String::new();
        for r in &results {
            writeln!(s, "{}\t{}\t{} / {}", if r.pass() { "PASS" } else { "FAIL" }, r.name, r.first, r.second).unwrap();
            if let Some(c) = &r.involution {
                writeln!(s, "\tinvolution fails: {} -> {} ({})", c.input, c.output, c.detail).unwrap();
            }
            if let Some(c) = &r.swap {
                writeln!(s, "\tswap fails: {} -> {} ({})", c.input, c.output, c.detail).unwrap();
            }
        }
        for l in &lemma_results {
            let verdict = if l.failures.is_empty() { "PASS" } else { "FAIL" };
            writeln!(s, "{verdict}\t{}\t{} pattern pairs", l.map, l.instantiations).unwrap();
            for f in &l.failures {
                writeln!(s, "\t{f}").unwrap();
            }
        }
        s
    };
    Ok(Output { stdout, ok })
}

fn verify_conjectures(depth: usize, class: Option<u32>, json: bool) -> Result<Output, CliError> {
    let seed = Seed::builtin();
    let ids: Vec<u32> = match class {
        None => CONJECTURED_CLASSES.to_vec(),
        Some(c) if CONJECTURED_CLASSES.contains(&c) => vec![c],
        Some(c) => return Err(CliError::Usage(format!("class {c} carries no open conjecture"))),
    };
    let results = ids.iter().map(|&id| catalog::conjecture_check(&seed, id, depth)).collect::<Result<Vec<_>, _>>()?;
    let ok = results.iter().all(|r| r.equal);
    let stdout = if json {
        envelope("verify-conjectures", json!({"depth": depth, "results": results}))
    } else {
        let mut s = String::new();
        for r in &results {
            match r.first_difference {
                None => writeln!(s, "PASS\tclass {}\tblocks equal for n <= {}", r.class_id, r.depth),
                Some((n, k)) => writeln!(s, "FAIL\tclass {}\tblocks differ at n={n}, k={k}", r.class_id),
            }
            .unwrap();
        }
        s
    };
    Ok(Output { stdout, ok })
}

fn series_cmd(gf: &str, order: usize, mode: Option<&str>, json: bool) -> Result<Output, CliError> {
    let key: GfKey = gf.parse()?;
    let mode: Mode = match mode {
        Some(m) => m.parse()?,
        None if series::DISTRIBUTION_GFS.contains(&key) => Mode::Distribution,
        None => Mode::Avoidance,
    };
    let s = series::gf_expand(key, order, mode)?;
    let rows: Vec<Vec<String>> = (0..=order).map(|n| s.row(n).iter().map(|c| c.to_string()).collect()).collect();
    if json {
        let mode = match mode {
            Mode::Avoidance => "avoidance",
            Mode::Distribution => "distribution",
        };
        return done(envelope("series", json!({"gf": key.to_string(), "mode": mode, "order": order, "rows": rows})));
    }
    let mut out = String::new();
    for (n, r) in rows.iter().enumerate() {
        writeln!(out, "x^{n}: {}", r.join(" ")).unwrap();
    }
    done(out)
}

/// Map plus the pattern pair it exchanges. The keep-the-maximum maps use the
/// pair with every free cell left open.
fn named_map(name: &str) -> Result<(Map, MeshPattern, MeshPattern), CliError> {
    if let Some(b) = bijections::by_name(name) {
        return Ok((b.map, b.first, b.second));
    }
    match name {
        "keep-max-complement" => {
            let (p, q) = bijections::keep_max_complement_pair([false; 6]);
            Ok((bijections::keep_max_complement, p, q))
        }
        "keep-max-reverse-left" => {
            let (p, q) = bijections::keep_max_reverse_pair([false; 4]);
            Ok((bijections::keep_max_reverse_left, p, q))
        }
        _ => Err(meshdist::Error::UnknownBijection(name.to_string()).into()),
    }
}

fn bijection(name: &str, pi: &Permutation, json: bool) -> Result<Output, CliError> {
    let (f, p, q) = named_map(name)?;
    let out = Permutation::new(f(pi.entries())).map_err(meshdist::Error::from)?;
    let c = |pat: &MeshPattern, x: &Permutation| meshdist::count_occurrences(pat, x);
    if json {
        let v = json!({
            "name": name,
            "input": pi.to_string(),
            "output": out.to_string(),
            "first": {"pattern": p.to_string(), "before": c(&p, pi), "after": c(&p, &out)},
            "second": {"pattern": q.to_string(), "before": c(&q, pi), "after": c(&q, &out)},
        });
        return done(envelope("bijection", v));
    }
    done(format!(
        "input\t{pi}\noutput\t{out}\n{p}\t{} -> {}\n{q}\t{} -> {}\n",
        c(&p, pi),
        c(&p, &out),
        c(&q, pi),
        c(&q, &out)
    ))
}

fn regen_appendix(depth: usize, json: bool) -> Result<Output, CliError> {
    let seed = Seed::builtin();
    let cat = Catalog::build(depth)?;
    let records = seed.records()?;
    if json {
        let rows: Vec<Value> = records
            .iter()
            .flat_map(|r| {
                let t = cat.table(r.representative());
                (1..=depth).map(move |n| json!({"class_id": r.class_id, "n": n, "counts": trimmed(&t.rows[n])}))
            })
            .collect();
        return done(envelope("regen-appendix", json!({"depth": depth, "rows": rows})));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["class_id", "n", "k", "count"])?;
    for r in &records {
        let t = cat.table(r.representative());
        for n in 1..=depth {
            for (k, v) in trimmed(&t.rows[n]).iter().enumerate() {
                w.write_record([r.class_id.to_string(), n.to_string(), k.to_string(), v.to_string()])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    done(String::from_utf8(bytes).expect("csv output is ascii"))
}

use std::fmt::Write as _;
use std::path::Path;

use hms_core::arith::{factorize, is_fundamental_discriminant};
use hms_core::chern::{enumerate_auto, table_csv, table_discriminants};
use hms_core::cusp::{
    cusp_resolution_disc, local_chern_divisor_sum_disc, totally_positive_unit_trace, zeta_minus_one_disc,
};
use hms_core::elliptic::{
    atkin_lehner_action, atkin_lehner_refine, bounds_gamma0, counts_from_catalogue, counts_full_group,
    counts_gamma0_exact, gamma0_elliptic_points, BoundSubMode, EllipticCounts,
};
use hms_core::forms::{h_bound, indefinite_cycles, reduced_definite_forms};
use hms_core::{
    classify, make_field, split_prime, theorem_table, tree_center, ChernMode, ChernReport, ClassNumberCache,
    FieldContext, PrimeIdealData, TreeGraph,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::render::{int, rat, rat_text, Artifact};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl From<hms_core::Error> for CliError {
    fn from(e: hms_core::Error) -> Self {
        let msg = format!("[{}] {e}", e.code());
        if e.is_input_error() {
            CliError::Input(msg)
        } else {
            CliError::Internal(msg)
        }
    }
}

type Out = Result<Artifact, CliError>;

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

fn cache(cfg: &RunConfig) -> Result<ClassNumberCache, CliError> {
    match &cfg.cache {
        Some(p) => Ok(ClassNumberCache::with_file(p)?),
        None => Ok(ClassNumberCache::in_memory()),
    }
}

fn primes_of_norm(f: &FieldContext, norm: u64) -> Result<Vec<PrimeIdealData>, CliError> {
    let fac = factorize(norm);
    let bad = || CliError::Input(format!("no prime ideal of norm {norm} in Q(sqrt {})", f.disc()));
    if fac.len() != 1 || fac[0].1 > 2 {
        return Err(bad());
    }
    let ps: Vec<PrimeIdealData> = split_prime(f, fac[0].0)?.into_iter().filter(|p| p.norm == norm).collect();
    if ps.is_empty() {
        return Err(bad());
    }
    Ok(ps)
}

fn require_real_fundamental(disc: i64) -> Result<(), CliError> {
    if disc < 5 || !is_fundamental_discriminant(disc) {
        return Err(CliError::Input(format!("{disc} is not a positive fundamental discriminant")));
    }
    Ok(())
}

fn prime_json(p: &PrimeIdealData) -> Value {
    json!({
        "p": p.p,
        "splitting": p.splitting,
        "norm": p.norm,
        "generator": p.generator.to_string(),
        "index": p.index,
    })
}

pub fn field(disc: i64, primes_up_to: u64) -> Out {
    let f = make_field(disc)?;
    let mut primes = vec![];
    for p in (2..=primes_up_to).filter(|&p| hms_core::arith::is_prime(p)) {
        primes.extend(split_prime(&f, p)?.iter().map(prime_json));
    }
    let (tr, nm) = f.omega_min_poly();
    let mut pretty = format!(
        "Q(sqrt {disc}): unit {} (norm {}), narrow class number {}\n",
        f.fundamental_unit(),
        f.unit_norm(),
        f.narrow_class_number()
    );
    for p in &primes {
        let _ = writeln!(
            pretty,
            "  {} {} norm {} generator {}",
            p["p"],
            p["splitting"].as_str().unwrap_or(""),
            p["norm"],
            p["generator"].as_str().unwrap_or("")
        );
    }
    Ok(Artifact {
        body: json!({
            "D": disc,
            "fundamental_unit": f.fundamental_unit().to_string(),
            "unit_norm": f.unit_norm(),
            "totally_positive_unit": f.totally_positive_unit().to_string(),
            "narrow_class_number": f.narrow_class_number(),
            "omega_min_poly": [tr, nm],
            "primes": primes,
        }),
        csv: None,
        pretty,
        formulas: vec!["fundamental unit by continued fraction", "prime splitting by Kronecker symbol"],
    })
}

pub fn classnumber(cfg: &RunConfig, disc: i64) -> Out {
    let cache = cache(cfg)?;
    if disc < 0 {
        let n = -disc;
        let h = cache.h_definite(n)?;
        let forms: Vec<[i64; 3]> = reduced_definite_forms(n)?.iter().map(|f| [f.a, f.b, f.c]).collect();
        let bound = (n > 1).then(|| h_bound(n));
        let holds = bound.as_ref().map(|b| num_rational::BigRational::from_integer(h.into()) <= *b);
        Ok(Artifact {
            pretty: format!("h({disc}) = {h}\n"),
            body: json!({
                "disc": disc,
                "kind": "definite",
                "h": h,
                "reduced_forms": forms,
                "bound": bound.as_ref().map(rat),
                "bound_holds": holds,
            }),
            csv: None,
            formulas: vec!["reduced forms |b| <= a <= c", "h(-N) <= sqrt(N) log(N) / pi"],
        })
    } else {
        require_real_fundamental(disc)?;
        let h = cache.h_narrow(disc)?;
        let cycles: Vec<Vec<[i64; 3]>> =
            indefinite_cycles(disc).iter().map(|c| c.iter().map(|f| [f.a, f.b, f.c]).collect()).collect();
        Ok(Artifact {
            pretty: format!("h+({disc}) = {h}\n"),
            body: json!({ "disc": disc, "kind": "narrow", "h": h, "cycles": cycles }),
            csv: None,
            formulas: vec!["cycles of reduced indefinite forms"],
        })
    }
}

pub fn zeta(disc: i64) -> Out {
    require_real_fundamental(disc)?;
    let z = zeta_minus_one_disc(disc);
    Ok(Artifact {
        pretty: format!("zeta(-1) = {}, volume = {}\n", rat_text(&z.zeta), rat_text(&z.volume)),
        body: json!({
            "D": disc,
            "zeta": rat(&z.zeta),
            "volume": rat(&z.volume),
            "exceeds_lower_bound": z.exceeds_lower_bound(),
        }),
        csv: None,
        formulas: vec!["zeta(-1) = (1/60) sum sigma_1((D - x^2)/4)", "zeta(-1) > D^(3/2)/360"],
    })
}

pub fn cusp(disc: i64) -> Out {
    require_real_fundamental(disc)?;
    let cyc = cusp_resolution_disc(disc);
    let sum = local_chern_divisor_sum_disc(disc)?;
    if sum != cyc.c {
        return Err(CliError::Internal(format!("cusp cycle gives c = {}, divisor sum gives {sum}", cyc.c)));
    }
    let m = cyc.monodromy();
    let trace = &m[0][0] + &m[1][1];
    let unit_trace = make_field(disc).ok().map(|f| int(&totally_positive_unit_trace(&f)));
    Ok(Artifact {
        pretty: format!("cycle {:?}, c = {}, l = {}\n", cyc.bs, cyc.c, cyc.l),
        body: json!({
            "D": disc,
            "cycle": cyc.bs,
            "c": cyc.c,
            "l": cyc.l,
            "c_divisor_sum": sum,
            "monodromy_trace": int(&trace),
            "positive_unit_trace": unit_trace,
        }),
        csv: None,
        formulas: vec![
            "minus continued fraction of (b + sqrt D)/2",
            "c = 2m - sum b_i",
            "c = -(1/2) sum sigma_0((D - x^2)/4)",
        ],
    })
}

fn counts_json(c: &EllipticCounts) -> Result<Value, CliError> {
    to_json(c)
}

pub fn elliptic(cfg: &RunConfig, disc: i64, prime_norm: Option<u64>, height: Option<u32>) -> Out {
    let f = make_field(disc)?;
    let cat = enumerate_auto(&f, height.unwrap_or(cfg.classifier().max_height))?;
    let classes: Vec<Value> = cat
        .classes
        .iter()
        .map(|c| json!({ "type": c.rotation.to_string(), "order": c.order(), "generator": c.matrix.to_string() }))
        .collect();
    let mut pretty = format!("D = {disc}: {} classes (height {})\n", cat.classes.len(), cat.height_bound);
    for c in &cat.classes {
        let _ = writeln!(pretty, "  {} {}", c.rotation, c.matrix);
    }
    let full = if disc > 12 { Some(counts_json(&counts_full_group(&f, true)?)?) } else { None };
    let mut body = json!({
        "D": disc,
        "height_bound": cat.height_bound,
        "classes": classes,
        "counts_enumerated": counts_json(&counts_from_catalogue(&cat))?,
        "counts_class_numbers": full,
    });
    if let Some(q) = prime_norm {
        let mut per_prime = vec![];
        for p in primes_of_norm(&f, q)? {
            let entry = match cfg.chern_mode() {
                ChernMode::Exact => {
                    let g0 = gamma0_elliptic_points(&f, &cat, &p)?;
                    let al = atkin_lehner_action(&cat, &g0)?;
                    let c0 = counts_gamma0_exact(&g0);
                    let w = atkin_lehner_refine(&c0, &p, Some(&al))?;
                    let _ = writeln!(
                        pretty,
                        "  prime {}: {} Gamma_0 classes, {} fixed by W",
                        p.generator,
                        g0.points.len(),
                        al.fixed.len()
                    );
                    json!({
                        "prime": prime_json(&p),
                        "gamma0_points": g0.points.iter().map(|x| json!({
                            "class": x.class_index,
                            "coset": to_json(&x.coset).unwrap_or(Value::Null),
                            "type": x.rotation.to_string(),
                            "generator": x.generator.to_string(),
                        })).collect::<Vec<_>>(),
                        "atkin_lehner_images": al.images,
                        "atkin_lehner_fixed": al.fixed.iter().map(|(i, t, g)| json!({
                            "class": i, "type": t.to_string(), "generator": g.to_string(),
                        })).collect::<Vec<_>>(),
                        "gamma0_counts": counts_json(&c0)?,
                        "w_counts": counts_json(&w)?,
                    })
                }
                ChernMode::PaperBound => {
                    let c0 = bounds_gamma0(&f, BoundSubMode::Analytic, cfg.precision)?;
                    let w = atkin_lehner_refine(&c0, &p, None)?;
                    json!({ "prime": prime_json(&p), "gamma0_counts": counts_json(&c0)?, "w_counts": counts_json(&w)? })
                }
            };
            per_prime.push(entry);
        }
        body["primes"] = json!(per_prime);
    }
    Ok(Artifact {
        body,
        csv: None,
        pretty,
        formulas: vec![
            "elliptic classes by height reduction on H x H",
            "rotation type from cos 2 theta_j = sigma_j(t^2 / 2 det) - 1",
            "Gamma_0 classes as fixed points on P^1(O/p)",
        ],
    })
}

fn report_pretty(r: &ChernReport) -> String {
    let rel = |b: bool| if b { ">=" } else { "=" };
    let mut c2 = format!("{} {}", rel(r.c2_is_lower_bound), rat_text(&r.c2));
    if !num_traits::Zero::is_zero(&r.c2_a2_coeff) {
        c2.push_str(&format!(" + {} a2", rat_text(&r.c2_a2_coeff)));
    }
    format!(
        "D = {}, n = {}: c1^2 {} {}, c2 {c2}, chi = {}{}, {:?}\n",
        r.disc,
        r.n,
        rel(r.c1_sq_is_lower_bound),
        rat_text(&r.c1_sq),
        rat_text(&r.chi),
        if num_traits::Zero::is_zero(&r.chi_a2_coeff) {
            String::new()
        } else {
            format!(" + {} a2", rat_text(&r.chi_a2_coeff))
        },
        r.verdict
    )
}

pub fn classify_cmd(cfg: &RunConfig, disc: i64, prime_norm: u64) -> Out {
    let f = make_field(disc)?;
    let conf = cfg.classifier();
    let mut reports = vec![];
    let mut pretty = String::new();
    for p in primes_of_norm(&f, prime_norm)? {
        let r = classify(&f, &p, cfg.chern_mode(), &conf)?;
        pretty.push_str(&report_pretty(&r));
        let mut v = to_json(&r)?;
        v["prime"] = prime_json(&p);
        reports.push(v);
    }
    let csv = crate::render::flatten_csv(&json!(reports));
    Ok(Artifact {
        body: json!({ "D": disc, "prime_norm": prime_norm, "reports": reports }),
        csv: Some(csv),
        pretty,
        formulas: vec![
            "c1^2 = 2 n zeta + c - a3+/3 - a4+ - 8 a6+/3",
            "c2 = n zeta + l + 3 a2/2 + 5 a3+/3 + 8 a3-/3 + 7 a4+/4 + 15 a4-/4 + 11 a6+/6 + 35 a6-/6",
            "12 chi = c1^2 + c2",
            "general type if c1^2 > 0 and chi > 1",
        ],
    })
}

pub fn table(cfg: &RunConfig, dmax: i64, n_max: u64, diff: Option<&Path>) -> Out {
    if dmax < 13 {
        return Err(CliError::Input(format!("--dmax must be at least 13, got {dmax}")));
    }
    let discs = table_discriminants(dmax);
    let report = theorem_table(&discs, n_max, &cfg.classifier())?;
    if let Some(path) = diff {
        let text =
            serde_json::to_string_pretty(&report.discrepancies).map_err(|e| CliError::Internal(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let mut pretty = String::new();
    for r in &report.rows {
        let _ = writeln!(pretty, "{:>5}  {}", r.disc, r.describe());
    }
    for d in &report.discrepancies {
        let _ = writeln!(pretty, "differs at D = {}: computed {}, table {}", d.disc, d.computed, d.paper);
    }
    Ok(Artifact {
        csv: Some(table_csv(&report.rows)),
        body: to_json(&report)?,
        pretty,
        formulas: vec![
            "n D^(3/2)/360 > 12",
            "c1^2 >= n D^(3/2)/180 + c - penalty",
            "c >= -(1/2) sqrt D ((3/(2 pi^2)) log^2 D + 1.05 log D) for D > 500",
        ],
    })
}

pub fn tree_center_cmd(input: &Path, set: &str, dot: Option<&Path>) -> Out {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    let t = TreeGraph::parse_edge_list(&text)?;
    let labels: Vec<&str> = set.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let s = t.resolve(&labels)?;
    let c = tree_center(&t, &s)?;
    if let Some(path) = dot {
        std::fs::write(path, t.to_dot()).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let names: Vec<&str> = c.vertices().into_iter().map(|v| t.label(v)).collect();
    Ok(Artifact {
        pretty: format!("{}\n", c.describe(&t)),
        body: json!({
            "kind": if c.is_edge() { "edge" } else { "vertex" },
            "payload": names,
            "set": labels,
            "vertices": t.len(),
        }),
        csv: None,
        formulas: vec!["midpoint of a longest path by double sweep"],
    })
}

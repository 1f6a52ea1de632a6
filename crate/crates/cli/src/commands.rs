use crate::args::{CfCmd, Cli, Command, Config, DeltaCmd, Format, MeasureKindArg, ProbeCmd, WordCmd};
use crate::input::{self, Failure, Outcome};
use crate::output::{emit, enclosure, interval, interval_cells, num, opt_interval, Table};
use devils_staircase::analysis::{
    irrational_probe, lowerbound_check, rational_left_quotients, rational_right_quotients, zero_plus_quotients,
    LowerBoundReport, QuotientTrace,
};
use devils_staircase::beta::ParryExpansion;
use devils_staircase::diophantine::{
    cf_expand_enclosure, cf_expand_rational, mu_estimate, presets, theta_estimate, CfPrefix, Classification, Magnitude,
    MeasureEstimate, Thresholds,
};
use devils_staircase::enclosure::simplest_between;
use devils_staircase::staircase::{
    default_irrational_tol, default_rational_tol, delta, delta_right_limit, plot_samples, DeltaResult, PlotRecord,
};
use devils_staircase::words::{
    bzb_word, central_word, christoffel, common_prefix_radius, is_parry_admissible, mechanical_prefix, Kind,
    RadiusSide, Slope, Word,
};
use devils_staircase::Enclosure;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub fn run(cli: &Cli) -> Outcome<Vec<u8>> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Word(cmd) => word(cfg, cmd),
        Command::Delta(DeltaCmd::Eval { slope, right_limit }) => {
            let slope = input::slope(slope, cfg.budget)?;
            delta_eval(cfg, &slope, *right_limit)
        }
        Command::Delta(DeltaCmd::Plot { from, to, max_den, out }) => {
            let rows = plot_samples(
                &input::fraction(from)?,
                &input::fraction(to)?,
                *max_den,
                &input::tolerance(&cfg.tol, default_rational_tol())?,
            )?;
            let records: Vec<PlotRecord> = rows.iter().map(|r| r.record(cfg.digits)).collect();
            let bytes = emit(
                cfg.format,
                Format::Csv,
                || serde_json::to_value(&records).expect("records serialize"),
                || {
                    let mut t = Table::new(&PlotRecord::HEADER);
                    for r in &records {
                        t.push(r.fields().iter().map(|s| s.to_string()).collect());
                    }
                    t
                },
            )?;
            match out {
                Some(path) => {
                    std::fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    Ok(Vec::new())
                }
                None => Ok(bytes),
            }
        }
        Command::Cf(CfCmd::Expand { value, lo, hi, n }) => {
            let prefix = match (value, lo, hi) {
                (Some(v), _, _) => cf_expand_rational(&input::fraction(v)?, *n),
                (None, Some(lo), Some(hi)) => {
                    let (lo, hi) = (input::fraction(lo)?, input::fraction(hi)?);
                    if lo > hi {
                        return Err(Failure::Input("need lo <= hi".into()));
                    }
                    cf_expand_enclosure(&Enclosure::new(lo, hi), *n)?
                }
                _ => return Err(Failure::Input("give --value or both --lo and --hi".into())),
            };
            expansion(cfg, &prefix)
        }
        Command::Cf(CfCmd::Convergents { source, n }) => {
            let (cf, _) = input::cf_source(source, cfg.budget)?;
            let cf = input::require_cf(cf)?;
            let (conv, err) = cf.convergents_partial(*n);
            let stopped = err.map(|e| e.to_string());
            let cells = |m: &Magnitude| m.as_exact().map(|v| v.to_string());
            emit(
                cfg.format,
                Format::Json,
                || {
                    let rows: Vec<Value> = conv
                        .iter()
                        .map(|c| {
                            json!({
                                "index": c.index,
                                "a": cells(&c.a),
                                "ln_a": opt_interval(&c.a.ln()),
                                "p": c.p.as_ref().map(|p| p.to_string()),
                                "q": cells(&c.q),
                                "ln_q": opt_interval(&c.q.ln()),
                                "lnln_q": opt_interval(&c.q.lnln()),
                            })
                        })
                        .collect();
                    json!({ "cf": cf.to_string(), "convergents": rows, "stopped": stopped })
                },
                || {
                    let mut t = Table::new(&["index", "a", "p", "q", "ln_q_lo", "ln_q_hi"]);
                    for c in &conv {
                        let [lo, hi] = interval_cells(&c.q.ln());
                        t.push(vec![
                            c.index.to_string(),
                            cells(&c.a).unwrap_or_default(),
                            c.p.as_ref().map(|p| p.to_string()).unwrap_or_default(),
                            cells(&c.q).unwrap_or_default(),
                            lo,
                            hi,
                        ]);
                    }
                    t.footer.extend(stopped.iter().map(|s| format!("stopped: {s}")));
                    t
                },
            )
        }
        Command::Measure { kind, source, n } => {
            let (cf, preset) = input::cf_source(source, cfg.budget)?;
            let est = match (kind, preset) {
                (MeasureKindArg::Mu, Some(p)) => p.mu(*n)?,
                (MeasureKindArg::Theta, Some(p)) => p.theta(*n)?,
                (MeasureKindArg::Mu, None) => mu_estimate(input::require_cf(cf)?.as_ref(), *n)?,
                (MeasureKindArg::Theta, None) => theta_estimate(input::require_cf(cf)?.as_ref(), *n)?,
            };
            measure(cfg, &est)
        }
        Command::Classify { source, n, mu_cutoff, theta_low, theta_high } => {
            let th = Thresholds { mu_cutoff: *mu_cutoff, theta_low: *theta_low, theta_high: *theta_high };
            let (cf, preset) = input::cf_source(source, cfg.budget)?;
            let report = match preset {
                Some(p) => p.classify(*n, th)?,
                None => devils_staircase::diophantine::classify_cf(input::require_cf(cf)?.as_ref(), *n, th)?,
            };
            let theta = match report.classification {
                Classification::Exponential { theta } => Some(theta),
                _ => None,
            };
            let label = report.classification.label();
            emit(
                cfg.format,
                Format::Json,
                || {
                    json!({
                        "class": label,
                        "theta": opt_interval(&theta),
                        "mu_headline": opt_interval(&report.mu.headline),
                        "ln_theta_headline": opt_interval(&report.theta.headline),
                        "ln_theta_trend": opt_interval(&report.theta.trend()),
                        "thresholds": {
                            "mu_cutoff": th.mu_cutoff,
                            "theta_low": th.theta_low,
                            "theta_high": th.theta_high,
                        },
                        "finite_n": report.finite_n,
                    })
                },
                || {
                    let mut t = Table::new(&["class", "mu_lo", "mu_hi", "ln_theta_lo", "ln_theta_hi", "finite_n"]);
                    let [mlo, mhi] = interval_cells(&report.mu.headline);
                    let [tlo, thi] = interval_cells(&report.theta.headline);
                    t.push(vec![label.to_string(), mlo, mhi, tlo, thi, report.finite_n.to_string()]);
                    t
                },
            )
        }
        Command::Probe(cmd) => probe(cfg, cmd),
        Command::Presets => {
            let list = presets();
            emit(
                cfg.format,
                Format::Json,
                || json!(list.iter().map(|(n, d)| json!({ "name": n, "description": d })).collect::<Vec<_>>()),
                || {
                    let mut t = Table::new(&["name", "description"]);
                    for (n, d) in &list {
                        t.push(vec![n.to_string(), d.to_string()]);
                    }
                    t
                },
            )
        }
    }
}

fn word(cfg: &Config, cmd: &WordCmd) -> Outcome<Vec<u8>> {
    let kind = |upper: bool| if upper { Kind::Upper } else { Kind::Lower };
    let (name, w, admissible) = match cmd {
        WordCmd::Christoffel { p, q, upper } => ("christoffel", christoffel(*p, *q, kind(*upper))?.to_string(), None),
        WordCmd::Central { p, q } => ("central", central_word(*p, *q)?.to_string(), None),
        WordCmd::Bzb { b, p, q } => ("bzb", bzb_word(*b, *p, *q)?.to_string(), None),
        WordCmd::Mechanical { slope, intercept, length, upper } => {
            let s = input::slope(slope, cfg.budget)?;
            let rho = input::fraction(intercept)?;
            ("mechanical", mechanical_prefix(&s, &rho, *length, kind(*upper))?.to_string(), None)
        }
        WordCmd::Admissible { word } => {
            let w: Word = word.parse()?;
            ("admissible", w.to_string(), Some(is_parry_admissible(&w)?))
        }
    };
    emit(
        cfg.format,
        Format::Json,
        || match admissible {
            Some(a) => json!({ "kind": name, "word": w, "admissible": a }),
            None => json!({ "kind": name, "word": w }),
        },
        || {
            let mut t = Table::new(&["kind", "word", "admissible"]);
            t.push(vec![name.to_string(), w.clone(), admissible.map(|a| a.to_string()).unwrap_or_default()]);
            t
        },
    )
}

fn expansion_text(e: &ParryExpansion) -> (&'static str, String) {
    match e {
        ParryExpansion::Finite(w) => ("finite", w.to_string()),
        ParryExpansion::Periodic(w) => ("periodic", w.to_string()),
        ParryExpansion::Sturmian(_) => {
            let prefix = e.prefix(64).map(|w| w.to_string()).unwrap_or_default();
            ("sturmian", format!("{prefix}..."))
        }
    }
}

fn delta_eval(cfg: &Config, slope: &Slope, right_limit: bool) -> Outcome<Vec<u8>> {
    let default_tol = match slope {
        Slope::Rational(_) => default_rational_tol(),
        Slope::Irrational(_) => default_irrational_tol(),
    };
    let tol = input::tolerance(&cfg.tol, default_tol)?;
    let d: DeltaResult = match (slope, right_limit) {
        (Slope::Rational(a), true) => delta_right_limit(a, &tol)?,
        (Slope::Irrational(_), true) => {
            return Err(Failure::Input("--right-limit needs a rational slope".into()));
        }
        (s, false) => delta(s, &tol)?,
    };
    let (kind, digits) = expansion_text(&d.expansion);
    let side = serde_json::to_value(d.side).expect("side serializes");
    let nature = serde_json::to_value(d.nature).expect("nature serializes");
    let poly: Option<Vec<String>> = d.polynomial.as_ref().map(|p| p.coeffs().iter().map(|c| c.to_string()).collect());
    emit(
        cfg.format,
        Format::Json,
        || {
            json!({
                "slope": d.slope.to_string(),
                "side": side,
                "beta": enclosure(&d.beta, cfg.digits),
                "expansion": digits,
                "expansion_kind": kind,
                "nature": nature,
                "polynomial": poly,
                "conventional": d.conventional,
            })
        },
        || {
            let mut t = Table::new(&["slope", "side", "beta_lo", "beta_hi", "expansion", "nature"]);
            let (lo, hi) = d.beta.to_decimal_pair(cfg.digits);
            let text = |v: &Value| v.as_str().unwrap_or_default().to_string();
            t.push(vec![d.slope.to_string(), text(&side), lo, hi, digits.clone(), text(&nature)]);
            t
        },
    )
}

fn expansion(cfg: &Config, p: &CfPrefix) -> Outcome<Vec<u8>> {
    emit(
        cfg.format,
        Format::Json,
        || {
            json!({
                "a0": p.a0.to_string(),
                "terms": p.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "complete": p.complete,
            })
        },
        || {
            let mut t = Table::new(&["index", "a"]);
            t.push(vec!["0".into(), p.a0.to_string()]);
            for (i, a) in p.terms.iter().enumerate() {
                t.push(vec![(i + 1).to_string(), a.to_string()]);
            }
            if !p.complete {
                t.footer.push("incomplete: further terms are not determined".into());
            }
            t
        },
    )
}

fn measure(cfg: &Config, est: &MeasureEstimate) -> Outcome<Vec<u8>> {
    let kind = serde_json::to_value(est.kind).expect("kind serializes");
    let scale = if kind == "theta" { "ln" } else { "linear" };
    emit(
        cfg.format,
        Format::Json,
        || {
            let running: Vec<Value> =
                est.running.iter().map(|r| json!({ "n": r.n, "value": interval(&r.value) })).collect();
            json!({
                "kind": kind,
                "scale": scale,
                "headline": opt_interval(&est.headline),
                "trend": opt_interval(&est.trend()),
                "window_max": opt_interval(&est.window_max()),
                "running": running,
                "finite_n": est.finite_n,
                "stopped": est.stopped,
            })
        },
        || {
            let mut t = Table::new(&["n", "value_lo", "value_hi"]);
            for r in &est.running {
                t.push(vec![r.n.to_string(), num(r.value.lo), num(r.value.hi)]);
            }
            let [lo, hi] = interval_cells(&est.headline);
            t.footer.push(format!("headline: {lo},{hi}"));
            t.footer.extend(est.stopped.iter().map(|s| format!("stopped: {s}")));
            t
        },
    )
}

fn probe(cfg: &Config, cmd: &ProbeCmd) -> Outcome<Vec<u8>> {
    let trace = match cmd {
        ProbeCmd::Left { alpha, k } => {
            rational_left_quotients(&input::fraction(alpha)?, *k, &input::tolerance(&cfg.tol, default_rational_tol())?)?
        }
        ProbeCmd::Right { alpha, k } => rational_right_quotients(
            &input::fraction(alpha)?,
            *k,
            &input::tolerance(&cfg.tol, default_rational_tol())?,
        )?,
        ProbeCmd::Zero { k } => zero_plus_quotients(*k, &input::tolerance(&cfg.tol, default_rational_tol())?)?,
        ProbeCmd::Irrational { source, k } => {
            let (cf, _) = input::cf_source(source, cfg.budget)?;
            let cf = input::require_cf(cf)?;
            if cf.rational_value().is_some() {
                return Err(Failure::Input("the continued fraction is finite; use probe left or right".into()));
            }
            irrational_probe(cf, *k, &input::tolerance(&cfg.tol, default_irrational_tol())?)?
        }
        ProbeCmd::Lowerbound { alpha, alpha_n, random } => return lowerbound(cfg, alpha, alpha_n, *random),
    };
    render_trace(cfg, &trace)
}

fn render_trace(cfg: &Config, trace: &QuotientTrace) -> Outcome<Vec<u8>> {
    let kind = serde_json::to_value(trace.kind).expect("kind serializes");
    let verdict = trace.verdict.label();
    emit(
        cfg.format,
        Format::Csv,
        || {
            let probes: Vec<Value> = trace
                .probes
                .iter()
                .map(|p| {
                    json!({
                        "k": p.k,
                        "scale": p.scale,
                        "alpha": p.alpha.to_string(),
                        "quotient": enclosure(&p.quotient, cfg.digits),
                    })
                })
                .collect();
            json!({
                "center": trace.center.to_string(),
                "kind": kind,
                "window": trace.window,
                "verdict": verdict,
                "stopped": trace.stopped,
                "probes": probes,
            })
        },
        || {
            let mut t = Table::new(&["k", "alpha_k_num", "alpha_k_den", "quotient_lo", "quotient_hi"]);
            for row in trace.csv_rows(cfg.digits) {
                t.push(row.to_vec());
            }
            t.footer.push(format!("verdict: {verdict}"));
            t.footer.extend(trace.stopped.iter().map(|s| format!("stopped: {s}")));
            t
        },
    )
}

/// A rational `α` and a slope just below it whose upper mechanical words
/// share a prefix of random length between 3 and 20.
fn random_pair(rng: &mut ChaCha8Rng) -> Outcome<(BigRational, BigRational)> {
    loop {
        let q: i64 = rng.gen_range(1..=30);
        let p: i64 = rng.gen_range(1..=3 * q);
        if p.gcd(&q) != 1 {
            continue;
        }
        let n: usize = rng.gen_range(3..=20);
        let a = BigRational::new(p.into(), q.into());
        let d = common_prefix_radius(&Slope::Rational(a.clone()), n, RadiusSide::Below)?.lo;
        let a_n = simplest_between(&(&a - &d), &(&a - &d / BigInt::from(2)));
        if a_n.is_positive() {
            return Ok((a, a_n));
        }
    }
}

fn lowerbound(
    cfg: &Config,
    alpha: &Option<String>,
    alpha_n: &Option<String>,
    random: Option<usize>,
) -> Outcome<Vec<u8>> {
    let tol = input::tolerance(&cfg.tol, default_rational_tol())?;
    let pairs: Vec<(Slope, Slope)> = match (alpha, alpha_n, random) {
        (_, _, Some(count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..count)
                .map(|_| random_pair(&mut rng).map(|(a, b)| (Slope::Rational(a), Slope::Rational(b))))
                .collect::<Outcome<_>>()?
        }
        (Some(a), Some(b), None) => vec![(input::slope_token(a, cfg.budget)?, input::slope_token(b, cfg.budget)?)],
        _ => return Err(Failure::Input("give --alpha and --alpha-n, or --random".into())),
    };
    let reports: Vec<(String, String, LowerBoundReport)> = pairs
        .iter()
        .map(|(a, b)| Ok((a.to_string(), b.to_string(), lowerbound_check(a, b, &tol)?)))
        .collect::<Outcome<_>>()?;
    let row_json = |(a, b, r): &(String, String, LowerBoundReport)| {
        json!({
            "alpha": a,
            "alpha_n": b,
            "n": r.n,
            "alpha_above": r.alpha_above,
            "b": r.b,
            "lhs": enclosure(&r.lhs, cfg.digits),
            "rhs": enclosure(&r.rhs, cfg.digits),
            "holds": r.holds,
        })
    };
    emit(
        cfg.format,
        Format::Json,
        || match random {
            Some(_) => Value::Array(reports.iter().map(row_json).collect()),
            None => row_json(&reports[0]),
        },
        || {
            let mut t = Table::new(&[
                "alpha",
                "alpha_n",
                "n",
                "alpha_above",
                "b",
                "lhs_lo",
                "lhs_hi",
                "rhs_lo",
                "rhs_hi",
                "holds",
            ]);
            for (a, b, r) in &reports {
                let (llo, lhi) = r.lhs.to_decimal_pair(cfg.digits);
                let (rlo, rhi) = r.rhs.to_decimal_pair(cfg.digits);
                t.push(vec![
                    a.clone(),
                    b.clone(),
                    r.n.to_string(),
                    r.alpha_above.to_string(),
                    r.b.to_string(),
                    llo,
                    lhi,
                    rlo,
                    rhi,
                    r.holds.to_string(),
                ]);
            }
            t
        },
    )
}

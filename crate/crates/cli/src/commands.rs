use std::collections::BTreeMap;
use std::fmt::Write as _;

use hypvol::expect::{
    expected_beta_integral_with, expected_hyp_volume, ideal_polytope3, ideal_simplex_volume, polygon_beta0, BetaSpec,
    ExpectOptions, ExpectationResult, Representation,
};
use hypvol::mcsim::{
    mc_absorption, mc_hull_area_d2, mc_ideal_polytope3_volume, mc_simplex_hyp_volume, McEstimate, SampleConfig,
};
use hypvol::verify::{run as run_checks, VerifyOptions};
use hypvol::QuadConfig;
use serde_json::Value;

use crate::record::{to_csv, OutputRecord};
use crate::{
    Case, Cli, CliError, Command, ExpectArgs, Format, HypvolumeArgs, Oracle, RepArg, SimulateArgs, SpecArgs, TableArgs,
    VerifyArgs,
};

type Params = BTreeMap<String, Value>;

/// Runs the parsed command and returns everything it prints.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Expect(a) => expect(a),
        Command::Hypvolume(a) => hypvolume(a),
        Command::Table(a) => table(a),
        Command::Simulate(a) => simulate(a, cli.strict),
        Command::Verify(a) => verify(a),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn line(rec: &OutputRecord) -> String {
    let mut s = rec.to_json();
    s.push('\n');
    s
}

fn quad_config(tol: Option<f64>) -> Result<QuadConfig, CliError> {
    let cfg = match tol {
        Some(t) => QuadConfig::default().with_rel_tol(t),
        None => QuadConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn spec_of(s: &SpecArgs) -> Result<BetaSpec, CliError> {
    let d = s.dim.ok_or_else(|| usage("--dim is required"))?;
    if s.betas.is_empty() {
        return Err(usage("--betas is required"));
    }
    Ok(BetaSpec::new(d, s.betas.clone())?)
}

fn spec_params(s: &BetaSpec) -> Params {
    let mut p = Params::new();
    p.insert("dim".into(), s.d().into());
    p.insert("betas".into(), s.betas().to_vec().into());
    p
}

fn expect(a: &ExpectArgs) -> Result<String, CliError> {
    let spec = spec_of(&a.spec)?;
    let cfg = quad_config(a.tol)?;
    let mut opts = ExpectOptions::default();
    let rep = match a.rep {
        RepArg::Upper => Some(Representation::Upper),
        RepArg::Lower => Some(Representation::Lower),
        RepArg::Auto => None,
    };
    if let Some(r) = rep {
        opts = opts.with_representation(r);
    }
    let r = expected_beta_integral_with(&spec, a.exponent, &cfg, &opts)?;
    let mut p = spec_params(&spec);
    p.insert("exponent".into(), a.exponent.into());
    p.insert("rep".into(), format!("{:?}", a.rep).to_lowercase().into());
    if let Some(t) = a.tol {
        p.insert("tol".into(), t.into());
    }
    Ok(line(&OutputRecord::from_expectation("expect", p, &r)))
}

/// Value of a special family at parameter `k` (`n`, or `d` for the simplex).
fn family(case: Case, k: u64, cfg: &QuadConfig) -> Result<ExpectationResult, CliError> {
    Ok(match case {
        Case::Ideal3 => {
            let exact = ideal_polytope3(k)?;
            let value = exact.to_f64();
            ExpectationResult {
                value,
                abs_err_est: 4.0 * f64::EPSILON * value,
                exact: Some(exact),
                representation: Representation::Upper,
                pole_path: false,
                near_pole: false,
                method: "exact-harmonic",
            }
        }
        Case::IdealSimplex => ideal_simplex_volume(to_u32(k)?, cfg)?,
        Case::PolygonBeta0 => polygon_beta0(to_u32(k)?, cfg)?,
        Case::Ideal2 => {
            let n = usize::try_from(k).map_err(|_| usage("n too large"))?;
            expected_hyp_volume(&BetaSpec::uniform(2, n, -1.0)?, cfg)?
        }
    })
}

fn to_u32(k: u64) -> Result<u32, CliError> {
    u32::try_from(k).map_err(|_| usage(format!("parameter {k} too large")))
}

fn param_name(case: Case) -> &'static str {
    if case == Case::IdealSimplex {
        "dim"
    } else {
        "n"
    }
}

fn family_record(command: &str, case: Case, k: u64, cfg: &QuadConfig) -> Result<OutputRecord, CliError> {
    let r = family(case, k, cfg)?;
    let mut p = Params::new();
    p.insert("case".into(), case.name().into());
    p.insert(param_name(case).into(), k.into());
    Ok(OutputRecord::from_expectation(command, p, &r))
}

fn hypvolume(a: &HypvolumeArgs) -> Result<String, CliError> {
    let cfg = quad_config(a.tol)?;
    let Some(case) = a.case else {
        if a.n.is_some() {
            return Err(usage("--n applies only with --case"));
        }
        let spec = spec_of(&a.spec)?;
        let r = expected_hyp_volume(&spec, &cfg)?;
        return Ok(line(&OutputRecord::from_expectation("hypvolume", spec_params(&spec), &r)));
    };
    if !a.spec.betas.is_empty() {
        return Err(usage("--betas conflicts with --case"));
    }
    let k = match case {
        Case::IdealSimplex => {
            if a.n.is_some() {
                return Err(usage("--case ideal-simplex takes --dim, not --n"));
            }
            u64::from(a.spec.dim.ok_or_else(|| usage("--case ideal-simplex needs --dim"))?)
        }
        _ => {
            match a.spec.dim {
                Some(d) if d != expected_dim(case) => {
                    return Err(usage(format!("--case {} lives in dimension {}", case.name(), expected_dim(case))))
                }
                _ => {}
            }
            a.n.ok_or_else(|| usage(format!("--case {} needs --n", case.name())))?
        }
    };
    Ok(line(&family_record("hypvolume", case, k, &cfg)?))
}

fn expected_dim(case: Case) -> u32 {
    match case {
        Case::Ideal3 => 3,
        _ => 2,
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let (a, b) = s.split_once(':').ok_or_else(|| usage(format!("--range must be a:b, got `{s}`")))?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad range bound `{t}`")));
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(usage(format!("empty range {a}:{b}")));
    }
    Ok((a, b))
}

fn table(a: &TableArgs) -> Result<String, CliError> {
    let cfg = quad_config(a.tol)?;
    let (lo, hi) = parse_range(&a.range)?;
    let rows =
        (lo..=hi).map(|k| family_record("table", a.case, k, &cfg).map(|r| (k, r))).collect::<Result<Vec<_>, _>>()?;
    Ok(match a.format {
        Format::Csv => to_csv(&rows),
        Format::Json => {
            let recs: Vec<&OutputRecord> = rows.iter().map(|(_, r)| r).collect();
            let mut s = serde_json::to_string(&recs).expect("records contain only finite numbers");
            s.push('\n');
            s
        }
    })
}

fn resolve_oracle(o: Oracle, spec: &BetaSpec) -> Oracle {
    if o != Oracle::Auto {
        return o;
    }
    let d = spec.d();
    if d == 2 {
        Oracle::GaussBonnet
    } else if d == 3 && spec.all_equal_to(-1.0) {
        Oracle::Lobachevsky
    } else if d == 3 && spec.n() == 4 && spec.betas().iter().all(|&b| b > -1.0) {
        Oracle::SimplexMc
    } else {
        Oracle::Absorption
    }
}

fn oracle_name(o: Oracle) -> &'static str {
    match o {
        Oracle::Auto => "auto",
        Oracle::Absorption => "absorption",
        Oracle::GaussBonnet => "gauss-bonnet",
        Oracle::Lobachevsky => "lobachevsky",
        Oracle::SimplexMc => "simplex-mc",
    }
}

fn simulate(a: &SimulateArgs, strict: bool) -> Result<String, CliError> {
    let seed = match (a.seed, strict) {
        (Some(s), _) => s,
        (None, true) => return Err(usage("--strict requires an explicit --seed")),
        (None, false) => 0,
    };
    let spec = spec_of(&a.spec)?;
    let oracle = resolve_oracle(a.oracle, &spec);
    if a.exponent.is_some() && oracle != Oracle::Absorption {
        return Err(usage("--exponent applies only to the absorption oracle"));
    }
    let sc = SampleConfig::new(seed, a.samples).with_streams(a.streams);
    let cfg = QuadConfig::default();
    let (est, target): (McEstimate, f64) = match oracle {
        Oracle::Absorption => {
            let beta = a.exponent.unwrap_or(0.0);
            let target = expected_beta_integral_with(&spec, beta, &cfg, &ExpectOptions::default())?.value;
            (mc_absorption(&spec, beta, &sc)?, target)
        }
        Oracle::GaussBonnet => {
            if spec.d() != 2 {
                return Err(usage("the gauss-bonnet oracle needs --dim 2"));
            }
            (mc_hull_area_d2(&spec, &sc)?, expected_hyp_volume(&spec, &cfg)?.value)
        }
        Oracle::Lobachevsky => {
            if spec.d() != 3 || !spec.all_equal_to(-1.0) {
                return Err(usage("the lobachevsky oracle needs --dim 3 and all betas -1"));
            }
            let n = spec.n() as u64;
            (mc_ideal_polytope3_volume(spec.n(), &sc)?, ideal_polytope3(n)?.to_f64())
        }
        Oracle::SimplexMc => (mc_simplex_hyp_volume(&spec, a.inner, &sc)?, expected_hyp_volume(&spec, &cfg)?.value),
        Oracle::Auto => unreachable!("resolved above"),
    };
    let mut p = spec_params(&spec);
    p.insert("samples".into(), a.samples.into());
    p.insert("streams".into(), a.streams.into());
    p.insert("oracle".into(), oracle_name(oracle).into());
    match oracle {
        Oracle::Absorption => {
            p.insert("exponent".into(), a.exponent.unwrap_or(0.0).into());
        }
        Oracle::SimplexMc => {
            p.insert("inner".into(), a.inner.into());
        }
        _ => {}
    }
    let mut rec = OutputRecord::new("simulate", p, est.mean, est.stderr, "monte-carlo");
    rec.seed = Some(seed);
    rec.extra.insert("stderr".into(), est.stderr.into());
    rec.extra.insert("n".into(), est.n.into());
    rec.extra.insert("resampled".into(), est.resampled.into());
    rec.extra.insert("target".into(), target.into());
    let z = est.z_score(target);
    // JSON has no infinities; an infinite z-score is reported as null.
    rec.extra.insert("z_score".into(), if z.is_finite() { z.into() } else { Value::Null });
    Ok(line(&rec))
}

fn verify(a: &VerifyArgs) -> Result<String, CliError> {
    if a.tolerance_scale.is_nan() || a.tolerance_scale < 0.0 {
        return Err(usage("--tolerance-scale must be non-negative"));
    }
    let results = run_checks(&VerifyOptions { quick: a.quick, tolerance_scale: a.tolerance_scale });
    let mut out = String::new();
    let _ = writeln!(out, "{:<6} {:<4} {:>9}  {:<40} detail", "id", "ok", "time", "check");
    for r in &results {
        let _ = writeln!(
            out,
            "{:<6} {:<4} {:>8.2}s  {:<40} {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.elapsed.as_secs_f64(),
            r.description,
            r.detail
        );
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let _ = writeln!(out, "{} of {} checks passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        Ok(out)
    } else {
        let _ = writeln!(out, "failed: {}", failed.join(", "));
        Err(CliError::Verification(out))
    }
}

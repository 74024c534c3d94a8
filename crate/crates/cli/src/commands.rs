use std::f64::consts::{PI, SQRT_2};
use std::io::Write;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;

use orbitmetric::applications::{
    bispectrum, lower_lipschitz_probe, pullback_ann, pullback_kmeans, quotient_mds, quotient_nearest,
    write_probe_csv, Dataset, DatasetFile,
};
use orbitmetric::distortion::{
    cycle_certificate, empirical_bilipschitz, lower_bound_search, solve_distortion_sdp, verify_dual,
    DualCertificate, DualFile, EuclideanSampler, FiniteMetric, FiniteMetricFile, GaussianPairs, MultisetSampler,
    PairSampler, QuotientSampler, SamplingOptions, SdpOptions, ShiftSampler, SpherePairs,
};
use orbitmetric::embeddings::{outer_product_map, projective_sphere_map, real_projective_embed, EmbeddingSpec};
use orbitmetric::{GroupAction, GroupSpec, InvariantMap, QuotientPoint};

use crate::args::*;
use crate::io::{output, parse_vector, read_json, short, write_json, AssertionFailure, InputError};

/// Slack on checked guarantees.
const GUARANTEE_SLACK: f64 = 1e-9;

fn load_group(arg: &str) -> Result<Arc<GroupAction>> {
    let spec: GroupSpec = read_json(arg)?;
    Ok(Arc::new(GroupAction::from_spec(&spec)?))
}

fn load_map(arg: &str) -> Result<InvariantMap> {
    let spec: EmbeddingSpec = read_json(arg)?;
    Ok(spec.build()?)
}

fn load_data(arg: &str) -> Result<Dataset> {
    let file: DatasetFile = read_json(arg)?;
    Ok(Dataset::from_file(&file)?)
}

fn load_metric(src: &MetricSource) -> Result<FiniteMetric> {
    match (&src.metric, src.cycle) {
        (Some(path), _) => {
            let file: FiniteMetricFile = read_json(path)?;
            Ok(FiniteMetric::from_file(&file)?)
        }
        (None, Some(n)) => Ok(FiniteMetric::cycle(n)?),
        (None, None) => Err(InputError("a metric (--metric or --cycle) is required".into()).into()),
    }
}

pub fn distance(a: &PairArgs) -> Result<()> {
    let g = load_group(&a.group)?;
    let (x, y) = (parse_vector(&a.x)?, parse_vector(&a.y)?);
    let d = g.quotient_distance(&x, &y)?;
    let m = g.max_filter(&x, &y)?;
    println!("distance {}, maxfilter {}", short(d), short(m));
    Ok(())
}

pub fn maxfilter(a: &MaxfilterArgs) -> Result<()> {
    let g = load_group(&a.group)?;
    let x = parse_vector(&a.x)?;
    match (&a.y, &a.templates) {
        (Some(y), _) => println!("maxfilter {}", short(g.max_filter(&x, &parse_vector(y)?)?)),
        (None, Some(t)) => {
            let templates: Vec<Vec<f64>> = read_json(t)?;
            let bank = g.max_filter_bank(&templates, &x)?;
            println!("{}", serde_json::to_string(&bank)?);
        }
        (None, None) => bail!(InputError("--y or --templates is required".into())),
    }
    Ok(())
}

pub fn embed(a: &EmbedArgs) -> Result<()> {
    let f = load_map(&a.map)?;
    let value = match (&a.x, &a.data) {
        (Some(x), _) => json!(f.eval(&parse_vector(x)?)?),
        (None, Some(d)) => json!(load_data(d)?.embedded(&f)?),
        (None, None) => bail!(InputError("--x or --data is required".into())),
    };
    write_json(a.out.as_deref(), &value)
}

pub fn figure_scatter(a: &ScatterArgs, seed: u64, threads: usize) -> Result<()> {
    let (map, sampler): (InvariantMap, Box<dyn PairSampler>) = match a.family {
        ScatterFamily::ProjectiveRaw => (outer_product_map(a.dim), Box::new(GaussianPairs { dim: a.dim })),
        ScatterFamily::ProjectiveNormalized => {
            (real_projective_embed(a.dim)?, Box::new(GaussianPairs { dim: a.dim }))
        }
        ScatterFamily::ProjectiveSphere => (projective_sphere_map(a.dim), Box::new(SpherePairs { dim: a.dim })),
    };
    let opts = SamplingOptions { seed, threads };
    let bounds = match &a.out {
        Some(path) => {
            let mut w = output(Some(path))?;
            let b = empirical_bilipschitz(&map, sampler.as_ref(), a.samples, opts, Some(&mut *w))?;
            w.flush()?;
            b
        }
        None => empirical_bilipschitz(&map, sampler.as_ref(), a.samples, opts, None)?,
    };
    if bounds.pairs_used == 0 {
        println!("pairs 0");
        return Ok(());
    }
    println!(
        "pairs {} min_ratio {:.12} max_ratio {:.12} degenerate {}",
        bounds.pairs_used, bounds.alpha_hat, bounds.beta_hat, bounds.degenerate
    );
    if a.family == ScatterFamily::ProjectiveNormalized
        && (bounds.alpha_hat < 1.0 - GUARANTEE_SLACK || bounds.beta_hat > SQRT_2 + GUARANTEE_SLACK)
    {
        bail!(AssertionFailure(format!(
            "ratios [{}, {}] leave [1, √2]",
            bounds.alpha_hat, bounds.beta_hat
        )));
    }
    Ok(())
}

pub fn cycle_table(a: &CycleArgs) -> Result<()> {
    println!("n sdp_c2 formula dual_gap");
    let mut invalid = false;
    let mut solver_failed = false;
    let mut mismatched = Vec::new();
    for &n in &a.n {
        if n < 4 || n % 2 != 0 || n > orbitmetric::distortion::MAX_SDP_POINTS {
            println!("{n} rejected: need even n with 4 ≤ n ≤ {}", orbitmetric::distortion::MAX_SDP_POINTS);
            invalid = true;
            continue;
        }
        let formula = n as f64 / 2.0 * (PI / n as f64).sin();
        let metric = FiniteMetric::cycle(n)?;
        let gap = verify_dual(&metric, &cycle_certificate(n)?, formula)?.gap;
        match solve_distortion_sdp(&metric, &SdpOptions::default()) {
            Ok(sol) => {
                println!("{n} {:.10} {formula:.10} {gap:.3e}", sol.c2());
                if (sol.c2() - formula).abs() > 1e-4 || gap.abs() > 1e-8 {
                    mismatched.push(n);
                }
            }
            Err(e) => {
                println!("{n} failed: {e}");
                solver_failed = true;
            }
        }
    }
    if !mismatched.is_empty() {
        bail!(AssertionFailure(format!("rows {mismatched:?} disagree with (n/2)·sin(π/n)")));
    }
    if solver_failed {
        bail!(orbitmetric::Error::SolverDivergence("some rows failed".into()));
    }
    if invalid {
        bail!(InputError("some rows were rejected".into()));
    }
    Ok(())
}

pub fn sdp(a: &SdpArgs) -> Result<()> {
    let metric = load_metric(&a.source)?;
    let sol = solve_distortion_sdp(&metric, &SdpOptions { tol: a.tol, ..SdpOptions::default() })?;
    println!(
        "c2 {:.10} lower {:.10} t {:.12e} iterations {}",
        sol.c2(),
        sol.c2_lower(),
        sol.certificate.t,
        sol.iterations
    );
    if let Some(p) = &a.out {
        write_json(Some(p), &sol.certificate.to_file())?;
    }
    if let Some(p) = &a.dual_out {
        write_json(Some(p), &sol.dual.to_file())?;
    }
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<()> {
    let metric = load_metric(&a.source)?;
    let dual = match (&a.dual, a.source.cycle) {
        (Some(path), _) => {
            let file: DualFile = read_json(path)?;
            DualCertificate::from_file(&file)?
        }
        (None, Some(n)) => cycle_certificate(n)?,
        (None, None) => bail!(InputError("--dual is required unless --cycle is given".into())),
    };
    let v = verify_dual(&metric, &dual, a.c)?;
    println!("gap {:.6e} optimal {}", v.gap, v.optimal);
    if a.expect_optimal && !v.optimal {
        bail!(AssertionFailure(format!("certificate does not prove c₂ = {}", a.c)));
    }
    Ok(())
}

pub fn lower_bound(a: &LowerBoundArgs, seed: u64) -> Result<()> {
    let space: Box<dyn QuotientSampler> = match a.space {
        Space::Euclidean => Box::new(EuclideanSampler::new(a.dim)),
        Space::Shift => Box::new(ShiftSampler::new(a.support)),
        Space::Multiset => Box::new(MultisetSampler::new(a.dim, a.support)?),
    };
    let r = lower_bound_search(space.as_ref(), a.size, a.rounds, seed)?;
    println!(
        "best_c2 {:.10} upper_c2 {:.10} failed_rounds {}",
        r.best_c2,
        r.solution.c2(),
        r.failed_rounds
    );
    if let Some(p) = &a.out {
        write_json(Some(p), &r.archive())?;
    }
    Ok(())
}

pub fn probe(a: &ProbeArgs, seed: u64) -> Result<()> {
    let f = load_map(&a.map)?;
    let center = match &a.center {
        Some(c) => parse_vector(c)?,
        None => {
            let dim = f.action().ambient_dim().context("the map's action has no fixed dimension; pass --center")?;
            vec![0.0; dim]
        }
    };
    let c = QuotientPoint::new(f.action().clone(), center)?;
    let rows = lower_lipschitz_probe(&f, &c, &a.radii, seed)?;
    let mut w = output(a.out.as_deref())?;
    write_probe_csv(&mut *w, &rows)?;
    w.flush()?;
    Ok(())
}

pub fn mds(a: &MdsArgs) -> Result<()> {
    let data = load_data(&a.data)?;
    let map = a.map.as_deref().map(load_map).transpose()?;
    let r = quotient_mds(&data, map.as_ref(), a.k)?;
    let error = r.error.map(|e| json!({ "error": e.error, "bound": e.bound, "holds": e.holds(GUARANTEE_SLACK) }));
    write_json(
        a.out.as_deref(),
        &json!({
            "coords": r.embedding.coords,
            "eigenvalues": r.embedding.eigenvalues,
            "residual": r.embedding.residual,
            "error": error,
        }),
    )?;
    if let Some(e) = r.error {
        if !e.holds(GUARANTEE_SLACK) {
            bail!(AssertionFailure(format!("MDS error {} exceeds bound {}", e.error, e.bound)));
        }
    }
    Ok(())
}

pub fn kmeans(a: &KmeansArgs, seed: u64) -> Result<()> {
    let data = load_data(&a.data)?;
    let f = load_map(&a.map)?;
    let r = pullback_kmeans(&data, &f, a.k, seed)?;
    write_json(
        a.out.as_deref(),
        &json!({
            "labels": r.labels,
            "embedded_objective": r.embedded_objective,
            "quotient_objective": r.quotient_objective,
            "iterations": r.iterations,
        }),
    )
}

pub fn ann(a: &AnnArgs) -> Result<()> {
    let data = load_data(&a.data)?;
    let f = load_map(&a.map)?;
    let q = QuotientPoint::new(data.action().clone(), parse_vector(&a.query)?)?;
    let j = pullback_ann(&data, &f, &q)?;
    let i = quotient_nearest(&data, &q)?;
    let dj = data.points()[j].distance(&q)?;
    let di = data.points()[i].distance(&q)?;
    println!("index {j} distance {} nearest {i} nearest_distance {}", short(dj), short(di));
    if let Some(c) = f.claimed_distortion() {
        if dj > c * di + GUARANTEE_SLACK {
            bail!(AssertionFailure(format!("returned distance {dj} exceeds {c}·{di}")));
        }
    }
    Ok(())
}

pub fn bispectrum_cmd(a: &BispectrumArgs) -> Result<()> {
    let x: Vec<Complex64> = match (&a.x, &a.real) {
        (Some(x), _) => {
            let v = parse_vector(x)?;
            if v.len() % 2 != 0 {
                bail!(InputError("--x needs interleaved real and imaginary parts".into()));
            }
            v.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
        }
        (None, Some(r)) => parse_vector(r)?.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        (None, None) => bail!(InputError("--x or --real is required".into())),
    };
    let b = bispectrum(&x)?;
    let rows: Vec<Vec<[f64; 2]>> =
        (0..b.nrows()).map(|k| (0..b.ncols()).map(|l| [b[(k, l)].re, b[(k, l)].im]).collect()).collect();
    write_json(a.out.as_deref(), &rows)
}


use infoex_core::conditional::{
    conditional_info, conditional_linear_entropy, guessing_game_trace, memory_exclusion_audit,
    min_entropy_chain_audit, min_entropy_lower_bound, random_local_schedule, ConditionalAudit,
    ConditionalForm, MinEntropyChain,
};
use infoex_core::entanglement::{default_beta_grid, eta_scan, optimize_weights, ppt_critical_eta};
use infoex_core::interferometry::mzi_scan;
use infoex_core::io::{EnsembleFile, ProbabilityFile, StateFile, WitnessFile};
use infoex_core::linalg::basis_ket;
use infoex_core::measurements::is_equal_trace;
use infoex_core::random::multinomial_counts;
use infoex_core::view::{
    ensemble_norm, ensemble_probabilities, exclusion_audit, exclusivity, is_complementary,
    is_informationally_complete, is_reducible, overlap_matrix, reconstruct_state, view_rank,
};
use infoex_core::{
    BipartiteState, DensityState, InfoAudit, ObservableCase, OptimizerConfig, RngSpec, Subsystem,
    Tolerances, WeightedEnsemble, WitnessSpec,
};
use serde::Serialize;
use std::path::Path;

use crate::args::{
    BoundArgs, CheckArgs, Format, GuessArgs, MziArgs, ReconstructArgs, SimulateArgs, Switch,
    WitnessArgs,
};
use crate::output::{in_file, read_json, CliResult, Failure, Outcome, RunConfig};

fn load_ensemble(path: &Path, tol: &Tolerances) -> CliResult<WeightedEnsemble> {
    let file: EnsembleFile = read_json(path)?;
    in_file(path, file.to_ensemble(tol))
}

fn load_state_file(path: &Path) -> CliResult<StateFile> {
    read_json(path)
}

#[derive(Serialize)]
struct BoundReport {
    dim: usize,
    measurements: usize,
    effects: usize,
    weights: Vec<f64>,
    normalized: bool,
    norm: f64,
    exclusivity: f64,
    view_rank: usize,
    informationally_complete: bool,
    complementary_pairs: Vec<[usize; 2]>,
    overlap_reducible: bool,
}

pub fn ier_bound(args: &BoundArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Json)?;
    let tol = &cfg.tolerances;
    let path = args
        .ensemble
        .as_ref()
        .or(args.input.as_ref())
        .expect("clap requires one of them");
    let e = load_ensemble(path, tol)?;
    let mut complementary_pairs = Vec::new();
    let ms = e.measurements();
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if is_complementary(&ms[i], &ms[j], tol)? {
                complementary_pairs.push([i, j]);
            }
        }
    }
    let report = BoundReport {
        dim: e.dim(),
        measurements: e.len(),
        effects: e.effect_count(),
        weights: e.weights().to_vec(),
        normalized: e.is_normalized(),
        norm: ensemble_norm(&e, tol)?,
        exclusivity: exclusivity(&e, tol)?,
        view_rank: view_rank(&e, tol)?,
        informationally_complete: is_informationally_complete(&e, tol)?,
        complementary_pairs,
        overlap_reducible: is_reducible(&overlap_matrix(&e), tol),
    };
    cfg.write_json("ier bound", &report)?;
    Ok(Outcome::default())
}

#[derive(Serialize)]
struct MemoryReport {
    dims: [usize; 2],
    form: Option<ConditionalForm>,
    conditional_entropy: f64,
    conditional_info: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    entropy_bound: Option<ConditionalAudit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_entropy: Option<MinEntropyChain>,
}

#[derive(Serialize)]
struct CheckReport {
    audit: InfoAudit,
    #[serde(skip_serializing_if = "Option::is_none")]
    memory: Option<MemoryReport>,
}

fn conditional_form(e: &WeightedEnsemble, d: usize, tol: &Tolerances) -> Option<ConditionalForm> {
    let ms = e.measurements();
    if ms.iter().all(|p| p.is_rank_one_projective(tol)) {
        Some(ConditionalForm::RankOneProjective)
    } else if ms.iter().all(|p| {
        is_equal_trace(p, tol)
            && (p.effects()[0].trace().re - d as f64 / p.len() as f64).abs() <= tol.state
    }) {
        Some(ConditionalForm::EqualTrace)
    } else {
        None
    }
}

pub fn ier_check(args: &CheckArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Json)?;
    let tol = &cfg.tolerances;
    let e = load_ensemble(&args.ensemble, tol)?;
    let file = load_state_file(&args.state)?;
    let (rho, memory_state) = if file.dims.is_some() {
        let ab = in_file(&args.state, file.to_bipartite(tol))?;
        (ab.reduced(Subsystem::A), Some(ab))
    } else {
        (in_file(&args.state, file.to_state(tol))?, None)
    };
    let audit = exclusion_audit(&e, &rho, tol)?;
    let mut slacks = vec![("exclusion bound", audit.slack)];
    let memory = match memory_state {
        None => None,
        Some(ab) => {
            let (da, db) = ab.dims();
            let form = conditional_form(&e, da, tol);
            let entropy_bound = form
                .map(|f| memory_exclusion_audit(&e, &ab, f, tol))
                .transpose()?;
            let min_entropy = match form {
                Some(ConditionalForm::RankOneProjective) => {
                    Some(min_entropy_chain_audit(&e, &ab, args.epsilon, tol)?)
                }
                _ => None,
            };
            if let Some(a) = &entropy_bound {
                slacks.push(("memory-assisted entropy bound", a.slack));
            }
            if let Some(m) = &min_entropy {
                slacks.push(("min-entropy chain", m.slack));
                slacks.push(("collision inequality", m.inner_slack));
            }
            Some(MemoryReport {
                dims: [da, db],
                form,
                conditional_entropy: conditional_linear_entropy(&ab, tol),
                conditional_info: conditional_info(&ab, tol),
                entropy_bound,
                min_entropy,
            })
        }
    };
    cfg.write_json("ier check", &CheckReport { audit, memory })?;
    Ok(Outcome::check(&slacks, tol))
}

#[derive(Serialize)]
struct OutcomeRow {
    measurement: usize,
    outcome: usize,
    label: String,
    value: f64,
}

pub fn tomo_simulate(args: &SimulateArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Json)?;
    let tol = &cfg.tolerances;
    let e = load_ensemble(&args.ensemble, tol)?;
    let rho = in_file(&args.state, load_state_file(&args.state)?.to_state(tol))?;
    let exact = ensemble_probabilities(&e, &rho)?;
    let data = if args.shots == 0 {
        exact
    } else {
        let spec = RngSpec::new(cfg.seed, "tomo-simulate");
        exact
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let mut rng = spec.child(&k.to_string()).rng();
                let counts = multinomial_counts(p, args.shots, &mut rng)?;
                Ok(counts
                    .into_iter()
                    .map(|n| n as f64 / args.shots as f64)
                    .collect())
            })
            .collect::<infoex_core::Result<Vec<Vec<f64>>>>()?
    };
    match cfg.format {
        Format::Json => {
            let file = ProbabilityFile {
                shots: (args.shots > 0).then_some(args.shots),
                data,
            };
            cfg.write_json("tomo simulate", &file)?;
        }
        Format::Csv => {
            let rows: Vec<OutcomeRow> = data
                .iter()
                .zip(e.measurements())
                .enumerate()
                .flat_map(|(m, (probs, p))| {
                    probs
                        .iter()
                        .zip(p.labels())
                        .enumerate()
                        .map(move |(k, (v, l))| OutcomeRow {
                            measurement: m,
                            outcome: k,
                            label: l.clone(),
                            value: *v,
                        })
                })
                .collect();
            cfg.write_rows("tomo simulate", &rows)?;
        }
    }
    Ok(Outcome::default())
}

#[derive(Serialize)]
struct ReconstructReport {
    shots: Option<u64>,
    raw: StateFile,
    projected: StateFile,
    raw_min_eigenvalue: f64,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_raw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_projected: Option<f64>,
}

pub fn tomo_reconstruct(args: &ReconstructArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Json)?;
    let tol = &cfg.tolerances;
    let e = load_ensemble(&args.ensemble, tol)?;
    let probs: ProbabilityFile = read_json(&args.input)?;
    in_file(&args.input, probs.validate(tol))?;
    let r = reconstruct_state(&e, &probs.data, tol)?;
    let truth = args
        .state
        .as_ref()
        .map(|p| in_file(p, load_state_file(p)?.to_state(tol)))
        .transpose()?;
    let report = ReconstructReport {
        shots: probs.shots,
        raw_min_eigenvalue: r.raw_min_eigenvalue,
        residual: r.residual,
        error_raw: truth.as_ref().map(|t| (&r.raw - t.matrix()).norm()),
        error_projected: truth
            .as_ref()
            .map(|t| (r.projected.matrix() - t.matrix()).norm()),
        raw: StateFile::from_raw_matrix(&r.raw),
        projected: StateFile::from_state(&r.projected),
    };
    cfg.write_json("tomo reconstruct", &report)?;
    Ok(Outcome::default())
}

fn load_witness(args: &WitnessArgs, tol: &Tolerances) -> CliResult<WitnessSpec> {
    match (&args.case, &args.input) {
        (Some(c), _) => Ok(c
            .parse::<ObservableCase>()
            .map_err(|e| Failure::Validation(e.to_string()))?
            .witness()),
        (None, Some(path)) => {
            let file: WitnessFile = read_json(path)?;
            in_file(path, file.to_witness(tol))
        }
        (None, None) => Err(Failure::Validation("pass --case or --input".into())),
    }
}

fn optimizer(cfg: &RunConfig) -> OptimizerConfig {
    OptimizerConfig {
        seed: cfg.seed,
        ..OptimizerConfig::default()
    }
}

fn require_two_qubits(w: &WitnessSpec) -> CliResult<()> {
    if w.dims() != (2, 2) {
        return Err(Failure::Precondition(format!(
            "the noisy family is two-qubit; witness acts on {}x{}",
            w.dims().0,
            w.dims().1
        )));
    }
    Ok(())
}

pub fn witness_eta_scan(args: &WitnessArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Csv)?;
    let w = load_witness(args, &cfg.tolerances)?;
    require_two_qubits(&w)?;
    let rows = eta_scan(
        &w,
        &default_beta_grid(args.grid),
        &optimizer(&cfg),
        &cfg.tolerances,
    )?;
    cfg.write_rows("witness eta-scan", &rows)?;
    Ok(Outcome::default())
}

pub fn witness_optimize(args: &WitnessArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Csv)?;
    let tol = &cfg.tolerances;
    let w = load_witness(args, tol)?;
    require_two_qubits(&w)?;
    let opt = optimizer(&cfg);
    let mut header: Vec<String> = [
        "beta",
        "eta_star",
        "eta_equ",
        "eta_opt",
        "objective",
        "converged",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..w.len()).map(|k| format!("w_{k}")));
    let mut rows = Vec::new();
    for beta in default_beta_grid(args.grid) {
        let o = optimize_weights(&w, beta, &opt, tol)?;
        let mut row = vec![
            format!("{beta:?}"),
            format!("{:?}", ppt_critical_eta(beta)?),
            format!("{:?}", o.eta_equ),
            format!("{:?}", o.eta_opt),
            format!("{:?}", o.objective),
            o.converged.to_string(),
        ];
        row.extend(o.weights.iter().map(|x| format!("{x:?}")));
        rows.push(row);
    }
    cfg.write_table("witness optimize", &header, &rows)?;
    Ok(Outcome::default())
}

pub fn mzi(args: &MziArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Csv)?;
    let tol = &cfg.tolerances;
    let rho = match &args.state {
        Some(p) => in_file(p, load_state_file(p)?.to_state(tol))?,
        None => DensityState::pure(&basis_ket(2, 0))?,
    };
    if rho.dim() != 2 {
        return Err(Failure::Validation(format!(
            "interferometer input must be a qubit, got dimension {}",
            rho.dim()
        )));
    }
    if args.grid == 0 {
        return Err(Failure::Validation("--grid must be positive".into()));
    }
    let rows = mzi_scan(args.alpha, args.bs2 == Switch::On, args.grid, &rho)?;
    cfg.write_rows("mzi scan", &rows)?;
    let worst = rows
        .iter()
        .map(|r| r.interference_residual.max(r.wpdr_residual))
        .fold(0.0, f64::max);
    Ok(Outcome::check(&[("interference identities", -worst)], tol))
}

#[derive(Serialize)]
struct GuessRow {
    step: usize,
    entropy_sum: f64,
    bound: f64,
    slack: f64,
    fidelity: f64,
    conditional_entropy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_entropy_bound: Option<f64>,
}

pub fn guess_game(args: &GuessArgs) -> CliResult<Outcome> {
    let cfg = RunConfig::new(&args.common, Format::Csv)?;
    let tol = &cfg.tolerances;
    let e = load_ensemble(&args.ensemble, tol)?;
    let ab: BipartiteState = in_file(&args.state, load_state_file(&args.state)?.to_bipartite(tol))?;
    let (da, _) = ab.dims();
    if conditional_form(&e, da, tol) != Some(ConditionalForm::RankOneProjective) {
        return Err(Failure::Precondition(
            "the guessing game needs rank-one projective measurements".into(),
        ));
    }
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        return Err(Failure::Validation(format!(
            "--epsilon must lie in (0, 1), got {}",
            args.epsilon
        )));
    }
    let mut rng = RngSpec::new(cfg.seed, "guess-game").rng();
    let schedule = random_local_schedule(ab.dims(), args.steps, &mut rng);
    let trace = guessing_game_trace(&ab, &e, &schedule, tol)?;
    let normed = if e.is_normalized() {
        e.clone()
    } else {
        e.normalize()?.0
    };
    let norm = ensemble_norm(&normed, tol)?;
    let rows: Vec<GuessRow> = trace
        .iter()
        .map(|s| GuessRow {
            step: s.step,
            entropy_sum: s.entropy_sum,
            bound: s.bound,
            slack: s.entropy_sum - s.bound,
            fidelity: s.fidelity,
            conditional_entropy: 1.0 - da as f64 * s.fidelity,
            min_entropy_bound: Some(min_entropy_lower_bound(norm, s.fidelity, args.epsilon)),
        })
        .collect();
    cfg.write_rows("guess-game run", &rows)?;
    let worst = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    Ok(Outcome::check(
        &[("memory-assisted entropy bound", worst)],
        tol,
    ))
}

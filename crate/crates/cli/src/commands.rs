//! Subcommand implementations; each produces a [`Table`].

use qtgp_core::linalg::vector;
use qtgp_core::open_system::simulate_trajectory;
use qtgp_core::spin::{
    analytic_eigensystem, berry_sweep, branch_state, critical_kappa, effective_hamiltonian, model_jump_phase,
    spin_berry_phase, spin_model, spin_phase_split, CoefficientPath, DiscontinuityConfig,
};
use qtgp_core::{Error, Params};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Command, RunConfig, UsageError};
use crate::output::{Cell, Table};

pub enum Failure {
    Usage(UsageError),
    Compute { error: Error, context: String },
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

fn params_context(p: &Params, branch: usize) -> String {
    format!("theta={} phi={} g={} kappa={} branch={branch}", p.theta, p.phi, p.g, p.kappa)
}

/// Invalid parameter values are the caller's fault; everything else is a
/// computational failure.
fn compute_error(error: Error, context: String) -> Failure {
    match error {
        Error::InvalidParameter(msg) => Failure::Usage(UsageError(format!("{msg} ({context})"))),
        error => Failure::Compute { error, context },
    }
}

fn point(cfg: &RunConfig) -> Result<Params, Failure> {
    let p = Params {
        theta: cfg.theta.scalar("theta")?,
        phi: cfg.phi.scalar("phi")?,
        g: cfg.g.scalar("g")?,
        kappa: cfg.kappa.scalar("kappa")?,
    };
    p.validate().map_err(|e| compute_error(e, params_context(&p, cfg.branch)))?;
    Ok(p)
}

fn num(x: f64) -> Cell {
    Cell::Num(x)
}

fn int(i: usize) -> Cell {
    Cell::Int(i as i64)
}

fn text(s: &str) -> Cell {
    Cell::Text(s.to_string())
}

/// `ok` if every value is finite, `non_finite` otherwise.
fn status_of(values: &[f64]) -> &'static str {
    if values.iter().all(|v| v.is_finite()) {
        "ok"
    } else {
        "non_finite"
    }
}

pub fn run(cfg: &RunConfig) -> Result<Table, Failure> {
    match cfg.command {
        Command::Eig => eig(cfg),
        Command::Berry => berry(cfg),
        Command::Split => split(cfg),
        Command::Jump => jump(cfg),
        Command::Sweep => sweep(cfg),
        Command::Kappa0 => kappa0(cfg),
        Command::Trajectory => trajectory(cfg),
    }
}

fn eig(cfg: &RunConfig) -> Result<Table, Failure> {
    let p = point(cfg)?;
    let branches = analytic_eigensystem(&p).map_err(|e| compute_error(e, params_context(&p, cfg.branch)))?;
    let h = effective_hamiltonian(&p);
    let rows = branches
        .iter()
        .map(|b| {
            let lam = b.eigenvalue(p.kappa);
            let right = vector::norm(&vector::axpy(&h.matvec(&b.right_vector()), -lam, &b.right_vector()));
            let left = vector::norm(&vector::axpy(&h.adjoint().matvec(&b.left_vector()), -lam.conj(), &b.left_vector()));
            let path = match b.path {
                CoefficientPath::Primary => "primary",
                CoefficientPath::Alternate => "alternate",
                CoefficientPath::Numeric => "numeric",
            };
            vec![
                int(b.index),
                num(b.energy.re),
                num(b.energy.im),
                num(lam.re),
                num(lam.im),
                num(b.norm_sqr),
                text(path),
                num(right),
                num(left),
            ]
        })
        .collect();
    Ok(Table {
        columns: vec![
            "branch", "energy_re", "energy_im", "eigenvalue_re", "eigenvalue_im", "norm_sqr", "coefficients",
            "right_residual", "left_residual",
        ],
        rows,
    })
}

fn berry(cfg: &RunConfig) -> Result<Table, Failure> {
    let p = point(cfg)?;
    let r = spin_berry_phase(&p, cfg.branch, cfg.loop_points)
        .map_err(|e| compute_error(e, params_context(&p, cfg.branch)))?;
    let amp = r.log_amplitude.unwrap_or(0.0);
    Ok(Table {
        columns: vec!["theta", "kappa", "g", "branch", "gamma", "gamma_unwrapped", "log_amplitude", "points", "status"],
        rows: vec![vec![
            num(p.theta),
            num(p.kappa),
            num(p.g),
            int(cfg.branch),
            num(r.geometric),
            num(r.geometric_unwrapped),
            num(amp),
            int(r.points),
            text(status_of(&[r.geometric, r.geometric_unwrapped, amp])),
        ]],
    })
}

fn split(cfg: &RunConfig) -> Result<Table, Failure> {
    let p = point(cfg)?;
    let s = spin_phase_split(&p, cfg.branch, cfg.loop_points)
        .map_err(|e| compute_error(e, params_context(&p, cfg.branch)))?;
    let rows = s
        .terms
        .iter()
        .enumerate()
        .map(|(j, t)| {
            vec![
                int(j + 1),
                num(t.weight_right),
                num(t.weight_left),
                num(t.weight.re),
                num(t.weight.im),
                num(t.phase_a()),
                num(t.phase_b()),
                num(s.recombined),
                num(s.direct),
                num(s.residual),
                num(s.max_weight_variation),
            ]
        })
        .collect();
    Ok(Table {
        columns: vec![
            "term", "weight_right", "weight_left", "weight_re", "weight_im", "phase_a", "phase_b", "recombined",
            "direct", "residual", "max_weight_variation",
        ],
        rows,
    })
}

fn grid_pairs(cfg: &RunConfig) -> Result<Vec<(f64, f64)>, Failure> {
    let thetas = cfg.theta.values();
    let kappas = cfg.kappa.values();
    Ok(thetas.iter().flat_map(|&t| kappas.iter().map(move |&k| (t, k))).collect())
}

fn jump(cfg: &RunConfig) -> Result<Table, Failure> {
    let (phi, g) = (cfg.phi.scalar("phi")?, cfg.g.scalar("g")?);
    let branch = cfg.branch;
    let rows = grid_pairs(cfg)?
        .into_par_iter()
        .map(|(theta, kappa)| {
            let result = Params::new(theta, phi, g, kappa).and_then(|p| model_jump_phase(branch, &p));
            let (value, status) = match result {
                Ok(v) => (v, status_of(&[v])),
                Err(e) => (f64::NAN, e.kind()),
            };
            vec![num(theta), num(phi), num(kappa), num(g), int(branch), num(value), text(status)]
        })
        .collect();
    Ok(Table { columns: vec!["theta", "phi", "kappa", "g", "branch", "jump_phase", "status"], rows })
}

fn sweep(cfg: &RunConfig) -> Result<Table, Failure> {
    let g = cfg.g.scalar("g")?;
    let rows = berry_sweep(&cfg.theta.values(), &cfg.kappa.values(), g, cfg.branch, cfg.loop_points)
        .into_iter()
        .map(|r| {
            let (gamma, unwrapped, status) = match &r.result {
                Ok(rep) => (rep.geometric, rep.geometric_unwrapped, status_of(&[rep.geometric, rep.geometric_unwrapped])),
                Err(e) => (f64::NAN, f64::NAN, e.kind()),
            };
            vec![
                num(r.theta),
                num(r.kappa),
                num(r.g),
                int(r.branch),
                num(gamma),
                num(unwrapped),
                int(cfg.loop_points),
                text(status),
            ]
        })
        .collect();
    Ok(Table { columns: vec!["theta", "kappa", "g", "branch", "gamma", "gamma_unwrapped", "points", "status"], rows })
}

fn kappa0(cfg: &RunConfig) -> Result<Table, Failure> {
    let g = cfg.g.scalar("g")?;
    let dc = DiscontinuityConfig {
        epsilon: cfg.epsilon,
        threshold: cfg.threshold,
        kappa_max: cfg.kappa_max,
        points: cfg.loop_points,
    };
    let k = critical_kappa(g, cfg.branch, cfg.tol, &dc)
        .map_err(|e| compute_error(e, format!("g={g} branch={} kappa_max={}", cfg.branch, cfg.kappa_max)))?;
    Ok(Table {
        columns: vec!["g", "branch", "kappa0", "bracket_lo", "bracket_hi", "evaluations", "points", "status"],
        rows: vec![vec![
            num(g),
            int(cfg.branch),
            num(k.kappa0),
            num(k.bracket.0),
            num(k.bracket.1),
            int(k.evaluations),
            int(cfg.loop_points),
            text(status_of(&[k.kappa0, k.bracket.0, k.bracket.1])),
        ]],
    })
}

fn trajectory(cfg: &RunConfig) -> Result<Table, Failure> {
    let p = point(cfg)?;
    let ctx = || params_context(&p, cfg.branch);
    let model = spin_model::<f64>();
    let psi0 = branch_state(cfg.branch, &p).map_err(|e| compute_error(e, ctx()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rec = simulate_trajectory(&model, |_| p, &psi0, cfg.duration, cfg.ode_steps, &mut rng)
        .map_err(|e| compute_error(e, ctx()))?;
    let labels: Vec<&str> = model.jumps().iter().map(|j| j.label.as_str()).collect();
    let amps = rec.final_state.amplitudes();
    let excited = amps[0].norm_sqr() + amps[1].norm_sqr();
    let mut rows: Vec<Vec<Cell>> = rec
        .jump_events
        .iter()
        .enumerate()
        .map(|(k, ev)| vec![int(k + 1), num(ev.time), text(labels[ev.operator]), text("")])
        .collect();
    // closing row: spin-a excited population of the final state
    rows.push(vec![int(rec.jump_events.len() + 1), num(rec.duration), text("end"), num(excited)]);
    Ok(Table { columns: vec!["event", "time", "kind", "excited_population"], rows })
}

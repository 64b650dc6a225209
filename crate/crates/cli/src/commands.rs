use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use quasident::antisym::{
    corollary2, dimn_basis, realize_monomial, realize_rank, verify_kerim, FactorProduct, MultiFn,
    DEFAULT_FN_BUDGET, DEFAULT_KERIM_BUDGET,
};
use quasident::exactla::QMatrix;
use quasident::freealg::QuasiPoly;
use quasident::genmat::{
    cayley_hamilton_big_q, cayley_hamilton_big_q_trace, cayley_hamilton_q, find_witness,
    is_central_randomized, is_quasi_identity_randomized, phi_eval, RandomizedVerdict,
};
use quasident::idsolve::{
    local_lin_dep, multilinear_identity_space, Confidence, DependenceMode, DependenceWitness, Verdict,
    DEFAULT_BUDGET,
};
use quasident::perm::factorial;
use quasident::Rational;

use crate::config::{AntisymCommand, Command, Mode, RunConfig};
use crate::error::CliError;
use crate::parse::{parse_quasipoly, parse_quasipoly_list};

/// Result of a command: whether its assertions held and the report fields.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub pass: bool,
    pub fields: Map<String, Value>,
}

impl Report {
    fn new(pass: bool, fields: Value) -> Report {
        match fields {
            Value::Object(fields) => Report { pass, fields },
            _ => unreachable!("report fields are an object"),
        }
    }
}

/// Basis vectors are printed only when they stay below this many terms.
const MAX_PRINTED_TERMS: usize = 64;

fn rational_json(r: &Rational) -> Value {
    Value::String(if r.is_integer() { r.numer().to_string() } else { r.to_string() })
}

fn matrix_json(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(rational_json).collect()))
            .collect(),
    )
}

fn point_json(point: &BTreeMap<u32, QMatrix>) -> Value {
    Value::Object(point.iter().map(|(k, m)| (format!("x{k}"), matrix_json(m))).collect())
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn check_budget(what: &str, cost: u128, budget: u128) -> Result<(), CliError> {
    if cost > budget {
        return Err(quasident::Error::BudgetExceeded {
            what: what.into(),
            cost,
            budget,
        }
        .into());
    }
    Ok(())
}

fn antisym_n(cfg: &RunConfig) -> Result<usize, CliError> {
    let n = cfg.require_n()?;
    if n < 2 {
        return Err(CliError::Usage("antisym commands need --n at least 2".into()));
    }
    Ok(n)
}

pub fn run_command(cmd: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match cmd {
        Command::VerifyCh => verify_ch(cfg),
        Command::Check { input } => check(&read_input(input)?, cfg),
        Command::SolveMultilinear { degree } => solve_multilinear(*degree, cfg),
        Command::CapelliDep { input } => capelli_dep(&read_input(input)?, cfg),
        Command::Antisym { which } => match which {
            AntisymCommand::Kerim => kerim(cfg),
            AntisymCommand::Corollary2 => corollary2_cmd(cfg),
            AntisymCommand::Dim => dim(cfg),
        },
    }
}

fn verify_ch(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.require_n()?;
    let cost = factorial(n + 1).saturating_mul((n as u128).saturating_pow(n as u32 + 1));
    check_budget(&format!("Cayley-Hamilton at n={n}"), cost, cfg.budget_or(DEFAULT_BUDGET))?;
    let q = cayley_hamilton_q(n);
    let big_q = cayley_hamilton_big_q(n);
    let q_zero = phi_eval(&q, n)?.is_zero();
    let big_q_zero = phi_eval(&big_q, n)?.is_zero();
    Ok(Report::new(
        q_zero && big_q_zero,
        json!({
            "q_n_vanishes": q_zero,
            "Q_n_vanishes": big_q_zero,
            "q_n_terms": q.len(),
            "Q_n_terms": big_q.len(),
            "Q_n": cayley_hamilton_big_q_trace(n).to_string(),
        }),
    ))
}

fn witness_json(found: Option<(BTreeMap<u32, QMatrix>, QMatrix)>) -> Value {
    match found {
        Some((point, value)) => json!({ "point": point_json(&point), "value": matrix_json(&value) }),
        None => Value::Null,
    }
}

fn randomized_json(v: &RandomizedVerdict) -> Value {
    json!({
        "holds": v.holds,
        "trials_run": v.trials_run,
        "degree": v.degree,
        "failure_bound": rational_json(&v.failure_bound),
    })
}

fn check(text: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let p = parse_quasipoly(text, cfg.n)?;
    let n = cfg.require_n()?;
    let cost = (p.len().max(1) as u128).saturating_mul((n as u128).saturating_pow(p.max_word_len() as u32 + 1));
    check_budget("evaluation of the input", cost, cfg.budget_or(DEFAULT_BUDGET))?;
    let sc = cfg.sample_config();
    let scalar = p.is_scalar();
    let mut out = json!({
        "input": p.to_string(),
        "scalar_coefficients": scalar,
    });
    match cfg.mode {
        Mode::Symbolic => {
            let phi = phi_eval(&p, n)?;
            let qi = phi.is_zero();
            let central_value = phi.as_scalar();
            out["quasi_identity"] = json!(qi);
            out["central"] = json!(central_value.is_some());
            out["ordinary_identity"] = json!(scalar && qi);
            out["evidence"] = json!("symbolic");
            if let Some(c) = &central_value {
                out["central_value"] = json!(c.to_string());
            }
            if !qi {
                out["nonzero_witness"] = witness_json(find_witness(&p, n, false, &sc)?);
            }
            if central_value.is_none() {
                out["noncentral_witness"] = witness_json(find_witness(&p, n, true, &sc)?);
            }
        }
        Mode::Randomized => {
            let qi = is_quasi_identity_randomized(&p, n, &sc)?;
            let central = is_central_randomized(&p, n, &sc)?;
            out["quasi_identity"] = json!(qi.holds);
            out["central"] = json!(central.holds);
            out["ordinary_identity"] = json!(scalar && qi.holds);
            out["evidence"] = json!("randomized");
            out["quasi_identity_test"] = randomized_json(&qi);
            out["central_test"] = randomized_json(&central);
            if let (Some(point), Some(value)) = (qi.witness, qi.witness_value) {
                out["nonzero_witness"] = witness_json(Some((point, value)));
            }
            if let (Some(point), Some(value)) = (central.witness, central.witness_value) {
                out["noncentral_witness"] = witness_json(Some((point, value)));
            }
        }
    }
    Ok(Report::new(true, out))
}

fn solve_multilinear(degree: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.require_n()?;
    if degree == 0 {
        return Err(CliError::Usage("--degree must be at least 1".into()));
    }
    let sol = multilinear_identity_space(n, degree, cfg.budget_or(DEFAULT_BUDGET))?;
    let spans = if degree == n {
        Some(sol.is_spanned_by(&cayley_hamilton_big_q(n))?)
    } else {
        None
    };
    let pass = match degree.cmp(&n) {
        std::cmp::Ordering::Less => sol.dimension() == 0,
        std::cmp::Ordering::Equal => sol.dimension() == 1 && spans == Some(true),
        std::cmp::Ordering::Greater => true,
    };
    let polys = sol.basis_polys();
    let basis = if polys.iter().all(|p| p.len() <= MAX_PRINTED_TERMS) {
        json!(polys.iter().map(QuasiPoly::to_string).collect::<Vec<_>>())
    } else {
        Value::Null
    };
    Ok(Report::new(
        pass,
        json!({
            "degree": degree,
            "dimension": sol.dimension(),
            "spans_Qn": spans,
            "unknowns": sol.ansatz.len(),
            "equations": sol.equations,
            "rank": sol.rank,
            "basis_terms": polys.iter().map(QuasiPoly::len).collect::<Vec<_>>(),
            "basis": basis,
        }),
    ))
}

fn capelli_dep(text: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let fs = parse_quasipoly_list(text, cfg.n)?;
    let n = cfg.require_n()?;
    if fs.is_empty() {
        return Err(CliError::Usage("the input lists no polynomials".into()));
    }
    let mode = match cfg.mode {
        Mode::Symbolic => DependenceMode::Symbolic,
        Mode::Randomized => DependenceMode::Randomized,
    };
    let rep = local_lin_dep(&fs, n, mode, &cfg.sample_config(), cfg.budget_or(DEFAULT_BUDGET))?;
    let confidence = match &rep.confidence {
        Confidence::Exact => json!({ "kind": "exact" }),
        Confidence::Probabilistic { trials, failure_bound } => json!({
            "kind": "probabilistic",
            "trials": trials,
            "failure_bound": rational_json(failure_bound),
        }),
    };
    let witness = match &rep.witness {
        DependenceWitness::CapelliVanishes { composite_terms, degree } => json!({
            "kind": "capelli_vanishes",
            "composite_terms": composite_terms,
            "degree": degree,
        }),
        DependenceWitness::Point { point, values } => json!({
            "kind": "independent_point",
            "point": point_json(point),
            "values": values.iter().map(matrix_json).collect::<Vec<_>>(),
        }),
    };
    Ok(Report::new(
        true,
        json!({
            "inputs": fs.iter().map(QuasiPoly::to_string).collect::<Vec<_>>(),
            "verdict": match rep.verdict { Verdict::Dependent => "dependent", Verdict::Independent => "independent" },
            "confidence": confidence,
            "witness": witness,
        }),
    ))
}

fn kerim(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = antisym_n(cfg)?;
    let rep = verify_kerim(n, cfg.budget_or(DEFAULT_KERIM_BUDGET))?;
    Ok(Report::new(
        rep.holds(),
        json!({
            "ambient": rep.target_dim,
            "domain": rep.domain_dim,
            "image_rank": rep.image_dim,
            "kernel_dim": rep.kernel_dim,
            "codim": rep.codim,
            "rho_vanishes_on_image": rep.rho_pi_zero,
            "ker_rho_equals_image": rep.image_equals_kernel,
            "complement": rep.complement.to_string(),
            "rho_complement": rational_json(&rep.rho_complement),
            "complement_spans": rep.complement_spans,
            "left_image_equal": rep.left_image_equal,
        }),
    ))
}

fn corollary2_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = antisym_n(cfg)?;
    let rep = corollary2(n, cfg.budget_or(DEFAULT_FN_BUDGET))?;
    Ok(Report::new(
        rep.holds(),
        json!({
            "fn_dim": rep.fn_dim,
            "ideal_dim": rep.ideal_dim,
            "x2_dim": rep.x2_dim,
            "intersection_dim": rep.intersection_dim,
            "sum_dim": rep.sum_dim,
            "outside_ideal_dim": rep.x2_dim - rep.intersection_dim,
        }),
    ))
}

fn dim(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = antisym_n(cfg)?;
    let basis = dimn_basis(n);
    let cost = (basis.len() as u128).saturating_mul(1u128 << (n * n).min(120));
    check_budget(&format!("realization rank at n={n}"), cost, cfg.budget_or(DEFAULT_BUDGET))?;
    let expected = n << n;
    // each sample contributes n^2 coordinates per function
    let samples = cfg.trials.max(basis.len().div_ceil(n * n) + 4);
    let fs: Vec<FactorProduct> = basis.iter().map(|m| realize_monomial(m, n)).collect();
    let refs: Vec<&dyn MultiFn> = fs.iter().map(|f| f as &dyn MultiFn).collect();
    let rank = realize_rank(n, &refs, samples, false, &cfg.sample_config())?;
    Ok(Report::new(
        rank == expected && basis.len() == expected,
        json!({
            "spanning_set": basis.len(),
            "expected": expected,
            "rank": rank,
            "samples": samples,
            "dimension_certified": rank == basis.len(),
        }),
    ))
}

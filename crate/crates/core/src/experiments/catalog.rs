//! Registry of runnable experiments and a parameter-map dispatcher.

use super::report::{ExperimentReport, Params};
use super::*;
use crate::commutant::weingarten_sum_diagnostic;
use crate::error::{Error, Result};
use crate::groups::GroupTag;
use crate::linalg::C64;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    /// Parameter names with defaults where one exists.
    pub params: &'static [&'static str],
    pub anchor: &'static str,
}

const ENS: &[&str] = &["n", "ensemble=haar (haar|identity|brickwork)", "depth=1", "samples=10000"];

pub fn list_experiments() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry { id: "clifford4_distinguisher", params: ENS, anchor: "Clifford unitary designs: four-copy lightcone distinguisher on the P^{⊗4} stabilizer state" },
        CatalogEntry { id: "orthogonal_epr_distinguisher", params: ENS, anchor: "Orthogonal unitary designs: local EPR projector after a Z perturbation" },
        CatalogEntry { id: "symplectic_j_distinguisher", params: ENS, anchor: "Symplectic unitary designs: local J-state projector after a Z perturbation" },
        CatalogEntry {
            id: "state_design_witness",
            params: &["group=Cl (Cl|O|U)", "n", "ensemble=haar", "depth=1", "i=1", "j=2", "samples=10000"],
            anchor: "State designs: two-copy Z_i, Z_j, Z_iZ_j witnesses with non-intersecting lightcones",
        },
        CatalogEntry { id: "symplectic_state_witness", params: ENS, anchor: "Symplectic state designs: Y-perturbed J-state overlap" },
        CatalogEntry { id: "matchgate_state_witness", params: ENS, anchor: "Matchgate state designs: end-to-end Majorana correlator" },
        CatalogEntry {
            id: "ppt_twirl_distance",
            params: &["group=O (O|Sp|Cl)", "n", "k=2", "input=real_product (real_product|product)"],
            anchor: "Equivalence of orthogonal/Clifford and unitary twirls on copy-wise PPT states",
        },
        CatalogEntry { id: "orthogonal_anticoncentration", params: &["xi", "m", "mode=exact (exact|bound|montecarlo)", "samples=10000"], anchor: "Orthogonal superblock anti-concentration: wall sum" },
        CatalogEntry { id: "matchgate_uniform_chi", params: &["n", "samples=0"], anchor: "Anti-concentration value of global random matchgates" },
        CatalogEntry { id: "matchgate_transfer_chi", params: &["xi", "m", "samples=0"], anchor: "Matchgate superblock anti-concentration: transfer matrix over patches" },
        CatalogEntry { id: "gluing_check", params: &["group=U (U|O|Cl)", "n", "xi", "k=2"], anchor: "Gluing lemma: two staggered layers of block designs" },
        CatalogEntry { id: "haar_fourth_moment", params: &["group (U|O|Cl|M)", "n", "samples=10000"], anchor: "Collision probability E|⟨0|U|0⟩|⁴ of global Haar ensembles" },
        CatalogEntry { id: "clifford_enumeration_deviation", params: &["n=2", "k=3"], anchor: "Clifford group as an exact unitary 3-design" },
        CatalogEntry { id: "t4_witness_gap", params: &["n=3"], anchor: "Clifford group fails to be a 4-design: R(T₄) witness" },
        CatalogEntry { id: "epr_relative_error_diagnostic", params: &["group=O (U|O)", "n=2", "k=2"], anchor: "Relative error on the distinct subspace from EPR states" },
        CatalogEntry { id: "weingarten_sum", params: &["group=O (O|Sp)", "n", "k=2"], anchor: "Sum of off-identity Weingarten entries over permutations" },
    ]
}

fn get_u(p: &Params, key: &str, default: Option<u64>) -> Result<u64> {
    match p.get(key) {
        Some(v) => v.as_u64().ok_or_else(|| Error::InvalidInput(format!("parameter {key} must be a non-negative integer"))),
        None => default.ok_or_else(|| Error::InvalidInput(format!("missing parameter {key}"))),
    }
}

fn get_s<'a>(p: &'a Params, key: &str, default: &'a str) -> Result<&'a str> {
    match p.get(key) {
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(Error::InvalidInput(format!("parameter {key} must be a string"))),
        None => Ok(default),
    }
}

fn get_group(p: &Params, default: Option<&str>) -> Result<GroupTag> {
    match (p.get("group"), default) {
        (Some(Value::String(s)), _) => s.parse(),
        (None, Some(d)) => d.parse(),
        _ => Err(Error::InvalidInput("missing parameter group".into())),
    }
}

fn ensemble(p: &Params, group: GroupTag, n: usize) -> Result<Ensemble> {
    Ensemble::parse(get_s(p, "ensemble", "haar")?, group, n, get_u(p, "depth", Some(1))? as usize)
}

fn random_product_state(n: usize, real: bool, opts: &RunOptions) -> Vec<C64> {
    let mut rng = opts.stream("ppt_twirl_distance/input").rng();
    let mut psi = vec![C64::new(1.0, 0.0)];
    for _ in 0..n {
        let q: [C64; 2] = if real {
            let t: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            [C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0)]
        } else {
            let a = crate::rng::complex_normal(&mut rng);
            let b = crate::rng::complex_normal(&mut rng);
            let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            [a / nrm, b / nrm]
        };
        psi = psi.iter().flat_map(|x| q.iter().map(move |y| x * y)).collect();
    }
    psi
}

/// Runs one grid point. Unknown ids and invalid parameter combinations are
/// errors; every report gets the requested parameters merged in.
pub fn run_experiment(id: &str, params: &Params, opts: &RunOptions) -> Result<Vec<ExperimentReport>> {
    let n = || get_u(params, "n", None).map(|v| v as usize);
    let samples = |d: u64| get_u(params, "samples", Some(d));
    let mut out = match id {
        "clifford4_distinguisher" => {
            let n = n()?;
            vec![clifford4_distinguisher(&ensemble(params, GroupTag::Cl, n)?, n, samples(10_000)?, opts)?]
        }
        "orthogonal_epr_distinguisher" => {
            let n = n()?;
            vec![orthogonal_epr_distinguisher(&ensemble(params, GroupTag::O, n)?, n, samples(10_000)?, opts)?]
        }
        "symplectic_j_distinguisher" => {
            let n = n()?;
            vec![symplectic_j_distinguisher(&ensemble(params, GroupTag::Sp, n)?, n, samples(10_000)?, opts)?]
        }
        "state_design_witness" => {
            let n = n()?;
            let g = get_group(params, Some("Cl"))?;
            let i = get_u(params, "i", Some(1))? as usize;
            let j = get_u(params, "j", Some(2))? as usize;
            if i == 0 || j == 0 {
                return Err(Error::InvalidInput("sites are counted from 1".into()));
            }
            state_design_witness(g, &ensemble(params, g, n)?, n, i - 1, j - 1, samples(10_000)?, opts)?
        }
        "symplectic_state_witness" => {
            let n = n()?;
            vec![symplectic_state_witness(&ensemble(params, GroupTag::Sp, n)?, n, samples(10_000)?, opts)?]
        }
        "matchgate_state_witness" => {
            let n = n()?;
            vec![matchgate_state_witness(&ensemble(params, GroupTag::M, n)?, n, samples(10_000)?, opts)?]
        }
        "ppt_twirl_distance" => {
            let n = n()?;
            let g = get_group(params, Some("O"))?;
            let k = get_u(params, "k", Some(2))? as usize;
            let real = match get_s(params, "input", "real_product")? {
                "real_product" => true,
                "product" => false,
                other => return Err(Error::InvalidInput(format!("unknown input {other}"))),
            };
            let mut r = ppt_twirl_distance_pure_power(g, n, k, &random_product_state(n, real, opts))?;
            r.seed = opts.seed;
            vec![r]
        }
        "orthogonal_anticoncentration" => {
            let mode = get_s(params, "mode", "exact")?.parse()?;
            vec![orthogonal_anticoncentration(get_u(params, "xi", None)? as usize, get_u(params, "m", None)? as usize, mode, samples(10_000)?, opts)?]
        }
        "matchgate_uniform_chi" => vec![matchgate_uniform_chi(n()?, samples(0)?, opts)?],
        "matchgate_transfer_chi" => vec![matchgate_transfer_chi(get_u(params, "xi", None)? as usize, get_u(params, "m", None)? as usize, samples(0)?, opts)?],
        "gluing_check" => vec![gluing_check(get_group(params, Some("U"))?, n()?, get_u(params, "xi", None)? as usize, get_u(params, "k", Some(2))? as usize)?],
        "haar_fourth_moment" => vec![haar_fourth_moment(get_group(params, None)?, n()?, samples(10_000)?, opts)?],
        "clifford_enumeration_deviation" => {
            vec![clifford_enumeration_deviation(get_u(params, "n", Some(2))? as usize, get_u(params, "k", Some(3))? as usize, opts)?]
        }
        "t4_witness_gap" => vec![t4_witness_gap(get_u(params, "n", Some(3))? as usize)?],
        "epr_relative_error_diagnostic" => vec![epr_relative_error_diagnostic(
            get_group(params, Some("O"))?,
            get_u(params, "n", Some(2))? as usize,
            get_u(params, "k", Some(2))? as usize,
        )?],
        "weingarten_sum" => {
            let g = get_group(params, Some("O"))?;
            let (n, k) = (n()?, get_u(params, "k", Some(2))? as usize);
            let mut p = Params::new();
            p.insert("group".into(), json!(g.to_string()));
            p.insert("n".into(), json!(n));
            p.insert("k".into(), json!(k));
            vec![ExperimentReport::exact("weingarten_sum", p, weingarten_sum_diagnostic(g, n, k)?, opts.seed)]
        }
        _ => return Err(Error::UnknownExperiment(id.to_string())),
    };
    for r in &mut out {
        r.seed = opts.seed;
        for (k, v) in params {
            r.params.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    Ok(out)
}

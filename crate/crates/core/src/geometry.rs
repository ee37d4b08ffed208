//! Polyhedral approximations of amoeba complement components and the
//! tropical approximation of the spine, both read off `Res_n[f]`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::density_bound;
use crate::error::{Error, Result};
use crate::lopsided::{is_lopsided, default_slack};
use crate::lp::{LinearProgram, LpSolution};
use crate::poly::{newton_polytope, ExponentVector, LaurentPolynomial};
use crate::resultant::{cyclic_resultant_with_health, ResultantOptions};

/// Coordinates of LP witnesses are confined to `|x_i| <= BOX_RADIUS`.
pub const BOX_RADIUS: f64 = 1e6;

pub const DEFAULT_STRICT_SLACK: f64 = 1e-9;

/// `normal . x + offset > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn value(&self, x: &[f64]) -> f64 {
        self.normal.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum::<f64>() + self.offset
    }
}

/// Strict inequalities cutting out the candidate component of index `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceSystem {
    pub k: ExponentVector,
    pub n: u64,
    pub ineqs: Vec<Halfspace>,
    #[serde(default)]
    pub feasible: Option<bool>,
    #[serde(default)]
    pub witness: Option<Vec<f64>>,
}

impl HalfspaceSystem {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.ineqs.iter().all(|h| h.value(x) > 0.0)
    }

    /// Smallest `(normal . x + offset) / |normal|` over the inequalities with
    /// nonzero normal, and the raw value for the others.
    pub fn depth(&self, x: &[f64]) -> f64 {
        self.ineqs
            .iter()
            .map(|h| {
                let norm = h.normal.iter().map(|&a| (a as f64).powi(2)).sum::<f64>().sqrt();
                if norm == 0.0 {
                    h.offset
                } else {
                    h.value(x) / norm
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// The component polyhedron of index `k` from `resf = Res_n[f]`: one
/// inequality per term `j` other than the candidate `n^r k`,
/// `(n^r k - j) . x + log|B_k| - log|b_j| - log D > 0`.
pub fn component_polyhedron(resf: &LaurentPolynomial, k: &ExponentVector, n: u64, big_d: f64) -> Result<HalfspaceSystem> {
    if k.len() != resf.nvars() {
        return Err(Error::DimensionMismatch { expected: resf.nvars(), found: k.len() });
    }
    if !(big_d > 0.0) {
        return Err(Error::InvalidArgument(format!("D must be positive, got {big_d}")));
    }
    let nr = (n as i64).pow(resf.nvars() as u32);
    let candidate = k.scaled(nr);
    let log_b = resf.coefficient(&candidate).ok_or_else(|| Error::NoCandidateTerm(k.to_vec()))?.ln_abs();
    let ineqs = resf
        .terms()
        .filter(|(j, _)| **j != candidate)
        .map(|(j, b)| Halfspace { normal: candidate.sub(j).into_inner(), offset: log_b - b.ln_abs() - big_d.ln() })
        .collect();
    Ok(HalfspaceSystem { k: k.clone(), n, ineqs, feasible: None, witness: None })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    Infeasible,
}

/// Decides whether some `x` with `|x_i| <= BOX_RADIUS` satisfies every
/// inequality with value at least `strict_slack`, by maximizing the
/// smallest normalized slack (capped at one). The returned witness is
/// checked directly against the system.
pub fn lp_feasible(h: &HalfspaceSystem, strict_slack: f64) -> Result<Feasibility> {
    let r = h.k.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for ineq in &h.ineqs {
        if ineq.normal.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: ineq.normal.len() });
        }
        let norm = ineq.normal.iter().map(|&a| (a as f64).powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            if ineq.offset < strict_slack {
                return Ok(Feasibility::Infeasible);
            }
            continue;
        }
        // -(a/|a|).(x+ - x-) + t <= offset/|a|
        let mut row = Vec::with_capacity(2 * r + 1);
        row.extend(ineq.normal.iter().map(|&a| -(a as f64) / norm));
        row.extend(ineq.normal.iter().map(|&a| a as f64 / norm));
        row.push(1.0);
        rows.push(row);
        rhs.push(ineq.offset / norm);
    }
    if rows.is_empty() {
        return Ok(Feasibility::Feasible(vec![0.0; r]));
    }
    for i in 0..r {
        for sign in [1.0, -1.0] {
            let mut row = vec![0.0; 2 * r + 1];
            row[i] = sign;
            row[r + i] = -sign;
            rows.push(row);
            rhs.push(BOX_RADIUS);
        }
    }
    let mut cap = vec![0.0; 2 * r + 1];
    cap[2 * r] = 1.0;
    rows.push(cap);
    rhs.push(1.0);
    let mut objective = vec![0.0; 2 * r + 1];
    objective[2 * r] = 1.0;
    match (LinearProgram { objective, rows, rhs }).solve()? {
        LpSolution::Infeasible => Ok(Feasibility::Infeasible),
        LpSolution::Unbounded => Err(Error::LinearProgram("bounded program reported unbounded".into())),
        LpSolution::Optimal { x, value } => {
            if value < strict_slack {
                return Ok(Feasibility::Infeasible);
            }
            let witness: Vec<f64> = (0..r).map(|i| x[i] - x[r + i]).collect();
            if h.ineqs.iter().all(|q| q.value(&witness) >= strict_slack) {
                Ok(Feasibility::Feasible(witness))
            } else {
                Err(Error::LinearProgram(format!("optimal point misses the system (depth {})", h.depth(&witness))))
            }
        }
    }
}

/// How the constant `D` in the component inequalities is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DChoice {
    /// `d(Delta) n^(r^2 - r)`.
    LatticeBound,
    /// One less than the number of terms of `Res_n[f]`.
    TermCount,
    Fixed(f64),
}

impl DChoice {
    fn value(self, f: &LaurentPolynomial, resf: &LaurentPolynomial, n: u64) -> Result<f64> {
        Ok(match self {
            DChoice::LatticeBound => {
                let r = f.nvars() as i32;
                density_bound(&newton_polytope(f)?) * (n as f64).powi(r * r - r)
            }
            DChoice::TermCount => (resf.len().saturating_sub(1)).max(1) as f64,
            DChoice::Fixed(d) => d,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentOptions {
    pub d_choice: DChoice,
    pub strict_slack: f64,
    pub resultant: ResultantOptions,
}

impl Default for ComponentOptions {
    fn default() -> Self {
        Self { d_choice: DChoice::LatticeBound, strict_slack: DEFAULT_STRICT_SLACK, resultant: ResultantOptions::default() }
    }
}

/// Component polyhedra for every `k` in `Delta(f) ∩ Z^r` with default options.
pub fn enumerate_components(f: &LaurentPolynomial, n: u64) -> Result<Vec<HalfspaceSystem>> {
    enumerate_components_with(f, n, &ComponentOptions::default())
}

/// Component polyhedra for every lattice point `k` of the Newton polytope,
/// with feasibility and witness filled in. A `k` whose candidate term is
/// missing from `Res_n[f]` gets an empty, infeasible system.
pub fn enumerate_components_with(f: &LaurentPolynomial, n: u64, opts: &ComponentOptions) -> Result<Vec<HalfspaceSystem>> {
    let resf = cyclic_resultant_with_health(f, n, &opts.resultant)?.0;
    components_of_resultant(f, &resf, n, opts)
}

fn components_of_resultant(
    f: &LaurentPolynomial,
    resf: &LaurentPolynomial,
    n: u64,
    opts: &ComponentOptions,
) -> Result<Vec<HalfspaceSystem>> {
    let big_d = opts.d_choice.value(f, resf, n)?;
    let candidates = newton_polytope(f)?.lattice_points()?;
    candidates
        .par_iter()
        .map(|k| match component_polyhedron(resf, k, n, big_d) {
            Ok(mut system) => {
                match lp_feasible(&system, opts.strict_slack)? {
                    Feasibility::Feasible(w) => {
                        system.feasible = Some(true);
                        system.witness = Some(w);
                    }
                    Feasibility::Infeasible => system.feasible = Some(false),
                }
                Ok(system)
            }
            Err(Error::NoCandidateTerm(_)) => {
                Ok(HalfspaceSystem { k: k.clone(), n, ineqs: Vec::new(), feasible: Some(false), witness: None })
            }
            Err(e) => Err(e),
        })
        .collect()
}

/// Tropical polynomial `max_k (coeff_k + k . x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalPolynomial {
    r: usize,
    terms: BTreeMap<ExponentVector, f64>,
}

#[derive(Serialize, Deserialize)]
struct TropicalTermJson {
    exp: Vec<i64>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct TropicalJson {
    r: usize,
    terms: Vec<TropicalTermJson>,
}

impl TropicalPolynomial {
    /// Duplicate exponents keep the larger coefficient (tropical sum).
    pub fn new<I: IntoIterator<Item = (ExponentVector, f64)>>(r: usize, terms: I) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("number of variables must be positive".into()));
        }
        let mut map: BTreeMap<ExponentVector, f64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: e.len() });
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument(format!("tropical coefficient {c} is not finite")));
            }
            let slot = map.entry(e).or_insert(c);
            *slot = slot.max(c);
        }
        if map.is_empty() {
            return Err(Error::EmptyList);
        }
        Ok(Self { r, terms: map })
    }

    pub fn nvars(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exp: &[i64]) -> Option<f64> {
        self.terms.get(&ExponentVector::from(exp)).copied()
    }

    /// `coeff_k + k . x` for every term.
    pub fn weights(&self, x: &[f64]) -> Vec<(ExponentVector, f64)> {
        self.terms.iter().map(|(e, &c)| (e.clone(), c + e.dot(x))).collect()
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, &c)| c + e.dot(x)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_json(&self) -> String {
        let json = TropicalJson {
            r: self.r,
            terms: self.terms.iter().map(|(e, &c)| TropicalTermJson { exp: e.to_vec(), coeff: c }).collect(),
        };
        serde_json::to_string(&json).expect("tropical polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: TropicalJson = serde_json::from_str(text)?;
        Self::new(json.r, json.terms.into_iter().map(|t| (ExponentVector::new(t.exp), t.coeff)))
    }
}

/// Default tie tolerance `1e-9 (1 + |max|)`.
pub fn default_tie_tol(max_value: f64) -> f64 {
    1e-9 * (1.0 + max_value.abs())
}

/// Whether the maximum of `coeff_k + k . x` is attained by at least two
/// exponents within `tie_tol` (the default relative tolerance when `None`).
pub fn spine_membership(t: &TropicalPolynomial, x: &[f64], tie_tol: Option<f64>) -> bool {
    let weights: Vec<f64> = t.terms.iter().map(|(e, &c)| c + e.dot(x)).collect();
    let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = tie_tol.unwrap_or_else(|| default_tie_tol(max));
    weights.iter().filter(|&&w| w >= max - tol).count() >= 2
}

/// Which components contribute a term to the spine approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpineRule {
    /// Components of the complement of `SA_{Res_n[f]}` (feasible polyhedra).
    #[default]
    Superlopsided,
    /// Components where `Res_n[f]` is lopsided with the candidate dominant,
    /// tested at the deepest point of the region where the candidate beats
    /// every other term individually. Offered for comparison only.
    Lopsided,
}

/// Tropical approximation of the spine: `k -> (1/n^r) log|B_{n^r k}|` over
/// the components selected by `rule`.
pub fn approximate_spine(f: &LaurentPolynomial, n: u64) -> Result<TropicalPolynomial> {
    approximate_spine_with(f, n, SpineRule::Superlopsided, &ComponentOptions::default())
}

pub fn approximate_spine_with(
    f: &LaurentPolynomial,
    n: u64,
    rule: SpineRule,
    opts: &ComponentOptions,
) -> Result<TropicalPolynomial> {
    let resf = cyclic_resultant_with_health(f, n, &opts.resultant)?.0;
    let selected: Vec<ExponentVector> = match rule {
        SpineRule::Superlopsided => components_of_resultant(f, &resf, n, opts)?
            .into_iter()
            .filter(|s| s.feasible == Some(true))
            .map(|s| s.k)
            .collect(),
        SpineRule::Lopsided => {
            let loose = ComponentOptions { d_choice: DChoice::Fixed(1.0), ..opts.clone() };
            let nr = (n as i64).pow(f.nvars() as u32);
            let slack = default_slack(f.precision());
            let mut out = Vec::new();
            for s in components_of_resultant(f, &resf, n, &loose)? {
                if let Some(w) = &s.witness {
                    let v = is_lopsided(&resf.magnitude_list(w)?, slack)?;
                    if v.dominant_exponent == Some(s.k.scaled(nr)) {
                        out.push(s.k);
                    }
                }
            }
            out
        }
    };
    if selected.is_empty() {
        return Err(Error::NoFeasibleComponents);
    }
    let nr = (n as f64).powi(f.nvars() as i32);
    let nr_i = (n as i64).pow(f.nvars() as u32);
    let terms = selected.into_iter().map(|k| {
        let b = resf.coefficient(&k.scaled(nr_i)).expect("feasible candidate has a term").ln_abs();
        (k, b / nr)
    });
    TropicalPolynomial::new(f.nvars(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nvars: usize, terms: &[(&[i64], f64)]) -> LaurentPolynomial {
        let t: Vec<(&[i64], f64, f64)> = terms.iter().map(|(e, c)| (*e, *c, 0.0)).collect();
        LaurentPolynomial::from_f64_terms(nvars, 256, &t).unwrap()
    }

    fn line() -> LaurentPolynomial {
        p(2, &[(&[0, 0], 1.0), (&[1, 0], 1.0), (&[0, 1], 1.0)])
    }

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn hs(normal: &[i64], offset: f64) -> Halfspace {
        Halfspace { normal: normal.to_vec(), offset }
    }

    #[test]
    fn polyhedra_of_the_line() {
        let f = line();
        let l2 = 2f64.ln();
        let s = component_polyhedron(&f, &ev(&[0, 0]), 1, 2.0).unwrap();
        let mut ineqs = s.ineqs.clone();
        ineqs.sort_by(|a, b| a.normal.cmp(&b.normal));
        assert_eq!(ineqs.len(), 2);
        assert_eq!(ineqs[0].normal, vec![-1, 0]);
        assert_eq!(ineqs[1].normal, vec![0, -1]);
        assert!(ineqs.iter().all(|h| (h.offset + l2).abs() < 1e-15));

        let s = component_polyhedron(&f, &ev(&[1, 0]), 1, 2.0).unwrap();
        let mut ineqs = s.ineqs.clone();
        ineqs.sort_by(|a, b| a.normal.cmp(&b.normal));
        assert_eq!(ineqs[0].normal, vec![1, -1]);
        assert_eq!(ineqs[1].normal, vec![1, 0]);

        assert!(matches!(component_polyhedron(&f, &ev(&[1, 1]), 1, 2.0), Err(Error::NoCandidateTerm(_))));
    }

    #[test]
    fn binomial_rays() {
        let f = p(1, &[(&[0], 1.0), (&[1], 1.0)]);
        let s = component_polyhedron(&f, &ev(&[1]), 1, 1.0).unwrap();
        assert_eq!(s.ineqs, vec![hs(&[1], 0.0)]);
        let s = component_polyhedron(&f, &ev(&[0]), 1, 1.0).unwrap();
        assert_eq!(s.ineqs, vec![hs(&[-1], 0.0)]);
    }

    #[test]
    fn lp_examples() {
        let l2 = 2f64.ln();
        let quadrant =
            HalfspaceSystem { k: ev(&[0, 0]), n: 1, ineqs: vec![hs(&[-1, 0], -l2), hs(&[0, -1], -l2)], feasible: None, witness: None };
        match lp_feasible(&quadrant, 1e-9).unwrap() {
            Feasibility::Feasible(w) => assert!(w[0] < -l2 && w[1] < -l2),
            other => panic!("{other:?}"),
        }
        let contradiction =
            HalfspaceSystem { k: ev(&[0]), n: 1, ineqs: vec![hs(&[1], 0.0), hs(&[-1], 0.0)], feasible: None, witness: None };
        assert_eq!(lp_feasible(&contradiction, 1e-9).unwrap(), Feasibility::Infeasible);
        let thin = HalfspaceSystem { k: ev(&[0]), n: 1, ineqs: vec![hs(&[1], 0.0), hs(&[-1], 1e-12)], feasible: None, witness: None };
        assert_eq!(lp_feasible(&thin, 1e-9).unwrap(), Feasibility::Infeasible);
        let constant = HalfspaceSystem { k: ev(&[0]), n: 1, ineqs: vec![hs(&[0], -1.0)], feasible: None, witness: None };
        assert_eq!(lp_feasible(&constant, 1e-9).unwrap(), Feasibility::Infeasible);
        let vacuous = HalfspaceSystem { k: ev(&[0, 0]), n: 1, ineqs: vec![], feasible: None, witness: None };
        assert_eq!(lp_feasible(&vacuous, 1e-9).unwrap(), Feasibility::Feasible(vec![0.0, 0.0]));
    }

    #[test]
    fn components_of_simple_curves() {
        let comps = enumerate_components(&line(), 1).unwrap();
        let ks: Vec<_> = comps.iter().map(|c| c.k.to_vec()).collect();
        assert_eq!(ks, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(comps.iter().all(|c| c.feasible == Some(true)));
        for c in &comps {
            assert!(c.contains(c.witness.as_ref().unwrap()));
        }

        let binomial = enumerate_components(&p(1, &[(&[0], 1.0), (&[1], 1.0)]), 3).unwrap();
        assert_eq!(binomial.len(), 2);
        assert!(binomial.iter().all(|c| c.feasible == Some(true)));

        let mono = enumerate_components(&p(2, &[(&[1, 0], 1.0)]), 2).unwrap();
        assert_eq!(mono.len(), 1);
        assert!(mono[0].ineqs.is_empty());
        assert_eq!(mono[0].feasible, Some(true));
    }

    #[test]
    fn square_has_no_interior_component_at_small_n() {
        // 1 + z1 + z2 + z1 z2 = (1 + z1)(1 + z2): no bounded component
        let f = p(2, &[(&[0, 0], 1.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[1, 1], 1.0)]);
        let comps = enumerate_components(&f, 2).unwrap();
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.feasible == Some(true)));
    }

    #[test]
    fn spine_examples() {
        let t = approximate_spine(&line(), 1).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.terms().all(|(_, c)| c.abs() < 1e-15));
        assert!(spine_membership(&t, &[0.0, 0.0], None));
        assert!(!spine_membership(&t, &[-1.0, -2.0], None));
        assert!(spine_membership(&t, &[3.0, 3.0], None));

        let b = approximate_spine(&p(1, &[(&[0], 1.0), (&[1], 1.0)]), 5).unwrap();
        assert_eq!(b.terms().map(|(e, _)| e.to_vec()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        assert!(spine_membership(&b, &[0.0], None));
        assert!(!spine_membership(&b, &[0.1], None));

        let la = approximate_spine_with(&line(), 2, SpineRule::Lopsided, &ComponentOptions::default()).unwrap();
        assert_eq!(la.len(), 3);
    }

    #[test]
    fn tropical_json_round_trip() {
        let t = TropicalPolynomial::new(2, [(ev(&[0, 0]), 0.0), (ev(&[1, 0]), -0.5), (ev(&[0, 1]), 0.25)]).unwrap();
        let json = t.to_json();
        assert_eq!(json, r#"{"r":2,"terms":[{"exp":[0,0],"coeff":0.0},{"exp":[0,1],"coeff":0.25},{"exp":[1,0],"coeff":-0.5}]}"#);
        assert_eq!(TropicalPolynomial::from_json(&json).unwrap(), t);
        assert!(TropicalPolynomial::from_json(r#"{"r":2,"terms":[]}"#).is_err());
        assert!(TropicalPolynomial::new(1, [(ev(&[0, 0]), 0.0)]).is_err());
    }

    #[test]
    fn halfspace_json_shape() {
        let comps = enumerate_components(&p(1, &[(&[0], 1.0), (&[1], 1.0)]), 1).unwrap();
        let json = serde_json::to_string(&comps[1]).unwrap();
        assert!(json.starts_with(r#"{"k":[1],"n":1,"ineqs":[{"normal":[1],"offset":"#), "{json}");
        assert!(json.contains(r#""feasible":true,"witness":["#));
        let back: HalfspaceSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, comps[1]);
    }
}

//! Sampled real-valued functions on a domain closure and the Schauder-space
//! norms: sup norm, C^m norm, Holder quotients, and the combined
//! ||f||_{m,alpha} = ||f||_m + sum of top-order quotients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::domain::{c_omega, SampledDomain};
use crate::error::{Result, SchauderError};
use crate::soperator::{check_alpha, check_same_domain, PairGrid};

/// Derivative label (eta_1, ..., eta_n); order |eta| is the component sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    /// The multi-index (0, ..., 0) labeling the function itself.
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The first-order multi-index along one axis.
    pub fn axis(n: usize, axis: usize) -> Self {
        let mut c = vec![0; n];
        c[axis] = 1;
        MultiIndex(c)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All multi-indices of `n` variables with |eta| = `order`,
    /// lexicographically sorted.
    pub fn all_of_order(n: usize, order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; n];
        fn rec(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
            if pos + 1 == current.len() {
                current[pos] = remaining;
                out.push(MultiIndex(current.clone()));
                return;
            }
            for c in 0..=remaining {
                current[pos] = c;
                rec(current, pos + 1, remaining - c, out);
            }
        }
        if n == 0 {
            return out;
        }
        rec(&mut current, 0, order, &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = SchauderError;

    fn from_str(s: &str) -> Result<Self> {
        let components: std::result::Result<Vec<u32>, _> =
            s.split(',').map(|t| t.trim().parse::<u32>()).collect();
        components
            .map(MultiIndex)
            .map_err(|e| SchauderError::InvalidParameter(format!("bad multi-index '{s}': {e}")))
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A function sampled at every closure point of a domain, optionally with
/// derivative samples up to `max_order`.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    domain: Arc<SampledDomain>,
    values: Vec<f64>,
    derivatives: BTreeMap<MultiIndex, Vec<f64>>,
    max_order: usize,
}

impl SampledFunction {
    pub fn new(domain: Arc<SampledDomain>, values: Vec<f64>) -> Result<Self> {
        let expected = domain.num_closure_points();
        if values.len() != expected {
            return Err(SchauderError::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(SampledFunction {
            domain,
            values,
            derivatives: BTreeMap::new(),
            max_order: 0,
        })
    }

    /// A function together with derivative samples for every multi-index of
    /// order 1..=`max_order`. Partial derivative maps are rejected.
    pub fn with_derivatives(
        domain: Arc<SampledDomain>,
        values: Vec<f64>,
        derivatives: BTreeMap<MultiIndex, Vec<f64>>,
        max_order: usize,
    ) -> Result<Self> {
        let expected = domain.num_closure_points();
        if values.len() != expected {
            return Err(SchauderError::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        let n = domain.dimension();
        for order in 1..=max_order {
            for eta in MultiIndex::all_of_order(n, order as u32) {
                match derivatives.get(&eta) {
                    None => {
                        return Err(SchauderError::MissingDerivatives {
                            member: 0,
                            eta: eta.to_string(),
                        })
                    }
                    Some(list) if list.len() != expected => {
                        return Err(SchauderError::LengthMismatch {
                            expected,
                            actual: list.len(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        for eta in derivatives.keys() {
            if eta.len() != n || eta.order() == 0 || eta.order() > max_order {
                return Err(SchauderError::InvalidParameter(format!(
                    "derivative {eta} outside 1..={max_order} in {n} variables"
                )));
            }
        }
        Ok(SampledFunction {
            domain,
            values,
            derivatives,
            max_order,
        })
    }

    /// Sample a closure `f` at every closure point.
    pub fn from_fn(domain: Arc<SampledDomain>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..domain.num_closure_points())
            .map(|i| f(domain.point(i)))
            .collect();
        SampledFunction {
            domain,
            values,
            derivatives: BTreeMap::new(),
            max_order: 0,
        }
    }

    /// Sample a function and its gradient; `grad` returns one value per axis.
    pub fn from_fn_with_gradient(
        domain: Arc<SampledDomain>,
        f: impl Fn(&[f64]) -> f64,
        grad: impl Fn(&[f64], usize) -> f64,
    ) -> Self {
        let n = domain.dimension();
        let count = domain.num_closure_points();
        let values = (0..count).map(|i| f(domain.point(i))).collect();
        let mut derivatives = BTreeMap::new();
        for d in 0..n {
            let list: Vec<f64> = (0..count).map(|i| grad(domain.point(i), d)).collect();
            derivatives.insert(MultiIndex::axis(n, d), list);
        }
        SampledFunction {
            domain,
            values,
            derivatives,
            max_order: 1,
        }
    }

    pub fn domain(&self) -> &Arc<SampledDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn derivative(&self, eta: &MultiIndex) -> Option<&[f64]> {
        self.derivatives.get(eta).map(Vec::as_slice)
    }

    pub fn derivatives(&self) -> &BTreeMap<MultiIndex, Vec<f64>> {
        &self.derivatives
    }
}

/// All Schauder-space norms of one function at exponent `alpha`.
#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    /// ||f||_0, the sup norm over closure points.
    pub sup_norm: f64,
    /// ||f||_m = sum over |eta| <= m of sup |D^eta f|.
    pub cm_norm: f64,
    /// Holder quotient of each top-order derivative (|eta| = m).
    pub holder_quotients: BTreeMap<MultiIndex, f64>,
    /// ||f||_{m,alpha} = cm_norm + sum of holder_quotients.
    pub cmalpha_norm: f64,
    pub alpha: f64,
}

fn sup_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub(crate) fn holder_quotient_values(
    values: &[f64],
    alpha: f64,
    pairs: &PairGrid,
) -> Result<f64> {
    check_alpha(alpha)?;
    if pairs.is_empty() {
        return Err(SchauderError::NoPairs);
    }
    let powers = pairs.powered_separations(alpha);
    let q = pairs
        .pairs()
        .par_iter()
        .zip(powers.par_iter())
        .map(|(&(i, j), &p)| (values[i as usize] - values[j as usize]).abs() / p)
        .reduce(|| 0.0, f64::max);
    Ok(q)
}

/// Sampled Holder quotient |f|_alpha: the maximum over the pair set of
/// |f(x) - f(y)| / |x - y|^alpha.
pub fn holder_quotient(f: &SampledFunction, alpha: f64, pairs: &PairGrid) -> Result<f64> {
    check_same_domain(f, pairs)?;
    holder_quotient_values(f.values(), alpha, pairs)
}

/// Full norm report for order `m`: requires derivative samples for every
/// |eta| <= m (fill them with [`fd_derivatives`] if absent).
pub fn norms(f: &SampledFunction, m: usize, alpha: f64, pairs: &PairGrid) -> Result<NormReport> {
    check_alpha(alpha)?;
    check_same_domain(f, pairs)?;
    let n = f.domain().dimension();
    let sup_norm = sup_abs(f.values());
    let mut cm_norm = sup_norm;
    for order in 1..=m {
        for eta in MultiIndex::all_of_order(n, order as u32) {
            let list = f.derivative(&eta).ok_or(SchauderError::OrderUnavailable {
                requested: m,
                missing: order,
            })?;
            cm_norm += sup_abs(list);
        }
    }
    let mut holder_quotients = BTreeMap::new();
    if m == 0 {
        holder_quotients.insert(
            MultiIndex::zero(n),
            holder_quotient_values(f.values(), alpha, pairs)?,
        );
    } else {
        for eta in MultiIndex::all_of_order(n, m as u32) {
            let list = f.derivative(&eta).ok_or(SchauderError::OrderUnavailable {
                requested: m,
                missing: m,
            })?;
            holder_quotients.insert(eta, holder_quotient_values(list, alpha, pairs)?);
        }
    }
    let cmalpha_norm = cm_norm + holder_quotients.values().sum::<f64>();
    Ok(NormReport {
        sup_norm,
        cm_norm,
        holder_quotients,
        cmalpha_norm,
        alpha,
    })
}

/// Base-point norm |f(x_bar)| + |f|_alpha, equivalent to ||f||_{0,alpha}.
pub fn basepoint_norm(
    f: &SampledFunction,
    xbar: usize,
    alpha: f64,
    pairs: &PairGrid,
) -> Result<f64> {
    let count = f.domain().num_closure_points();
    if xbar >= count {
        return Err(SchauderError::IndexOutOfRange {
            index: xbar,
            count,
        });
    }
    Ok(f.values()[xbar].abs() + holder_quotient(f, alpha, pairs)?)
}

// -------------------------------------------------------------------------
// finite differences

/// Second-order finite difference of `values` along `axis` at every closure
/// point: central where both lattice neighbors exist, one-sided otherwise.
fn fd_first_axis(dom: &SampledDomain, values: &[f64], axis: usize) -> Result<Vec<f64>> {
    let h = dom.spacing();
    let count = dom.num_closure_points();
    let shift = |i: usize, steps: i64| -> Option<usize> {
        let mut g = dom.grid_coords(i).to_vec();
        g[axis] += steps;
        dom.lookup_grid(&g)
    };
    let mut out = vec![0.0; count];
    for i in 0..count {
        let fwd = shift(i, 1);
        let bwd = shift(i, -1);
        out[i] = match (fwd, bwd) {
            (Some(f1), Some(b1)) => (values[f1] - values[b1]) / (2.0 * h),
            (Some(f1), None) => {
                let f2 = shift(i, 2).ok_or(SchauderError::InsufficientGridSupport {
                    point: i,
                    axis,
                })?;
                (-3.0 * values[i] + 4.0 * values[f1] - values[f2]) / (2.0 * h)
            }
            (None, Some(b1)) => {
                let b2 = shift(i, -2).ok_or(SchauderError::InsufficientGridSupport {
                    point: i,
                    axis,
                })?;
                (3.0 * values[i] - 4.0 * values[b1] + values[b2]) / (2.0 * h)
            }
            (None, None) => {
                return Err(SchauderError::InsufficientGridSupport { point: i, axis });
            }
        };
    }
    Ok(out)
}

fn fd_second_axis(dom: &SampledDomain, values: &[f64], axis: usize) -> Result<Vec<f64>> {
    let h = dom.spacing();
    let h2 = h * h;
    let count = dom.num_closure_points();
    let shift = |i: usize, steps: i64| -> Option<usize> {
        let mut g = dom.grid_coords(i).to_vec();
        g[axis] += steps;
        dom.lookup_grid(&g)
    };
    let mut out = vec![0.0; count];
    for i in 0..count {
        let fwd = shift(i, 1);
        let bwd = shift(i, -1);
        out[i] = match (fwd, bwd) {
            (Some(f1), Some(b1)) => (values[f1] - 2.0 * values[i] + values[b1]) / h2,
            (Some(f1), None) => {
                let f2 = shift(i, 2).ok_or(SchauderError::InsufficientGridSupport {
                    point: i,
                    axis,
                })?;
                match shift(i, 3) {
                    Some(f3) => {
                        (2.0 * values[i] - 5.0 * values[f1] + 4.0 * values[f2] - values[f3]) / h2
                    }
                    None => (values[i] - 2.0 * values[f1] + values[f2]) / h2,
                }
            }
            (None, Some(b1)) => {
                let b2 = shift(i, -2).ok_or(SchauderError::InsufficientGridSupport {
                    point: i,
                    axis,
                })?;
                match shift(i, -3) {
                    Some(b3) => {
                        (2.0 * values[i] - 5.0 * values[b1] + 4.0 * values[b2] - values[b3]) / h2
                    }
                    None => (values[i] - 2.0 * values[b1] + values[b2]) / h2,
                }
            }
            (None, None) => {
                return Err(SchauderError::InsufficientGridSupport { point: i, axis });
            }
        };
    }
    Ok(out)
}

/// Fill derivative samples up to `order` (at most 2) by finite differences
/// on the uniform grid: central differences inside, one-sided second-order
/// stencils at boundary-adjacent points. Exact on polynomials of degree <= 2.
pub fn fd_derivatives(f: &SampledFunction, order: usize) -> Result<SampledFunction> {
    if order == 0 || order > 2 {
        return Err(SchauderError::UnsupportedOrder(order));
    }
    let dom = f.domain().clone();
    let n = dom.dimension();
    let mut derivatives: BTreeMap<MultiIndex, Vec<f64>> = BTreeMap::new();
    let mut firsts: Vec<Vec<f64>> = Vec::with_capacity(n);
    for d in 0..n {
        let list = fd_first_axis(&dom, f.values(), d)?;
        derivatives.insert(MultiIndex::axis(n, d), list.clone());
        firsts.push(list);
    }
    if order == 2 {
        for eta in MultiIndex::all_of_order(n, 2) {
            let c = eta.components();
            let list = if let Some(d) = (0..n).find(|&d| c[d] == 2) {
                fd_second_axis(&dom, f.values(), d)?
            } else {
                // mixed: the first axis with a 1 was differenced already;
                // difference that field along the second axis
                let d1 = (0..n).find(|&d| c[d] == 1).expect("order-2 multi-index");
                let d2 = (d1 + 1..n).find(|&d| c[d] == 1).expect("two unit entries");
                fd_first_axis(&dom, &firsts[d1], d2)?
            };
            derivatives.insert(eta, list);
        }
    }
    SampledFunction::with_derivatives(dom, f.values().to_vec(), derivatives, order)
}

// -------------------------------------------------------------------------
// gradient bound

/// Both sides of the bound |f|_1 <= c[Omega] * sum_i sup |df/dx_i|,
/// evaluated on the sampled domain over all closure pairs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GradientBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Check the gradient bound for a function carrying first derivatives on a
/// connected domain. The tolerance 1e-6 * (1 + rhs) absorbs rounding.
pub fn gradient_seminorm_check(f: &SampledFunction, dom: &Arc<SampledDomain>) -> Result<GradientBound> {
    if f.domain().fingerprint() != dom.fingerprint() {
        return Err(SchauderError::DomainMismatch(
            "function was sampled on a different domain".into(),
        ));
    }
    if !dom.connected() {
        return Err(SchauderError::COmegaInfinite);
    }
    let n = dom.dimension();
    let mut deriv_sup_sum = 0.0;
    for d in 0..n {
        let eta = MultiIndex::axis(n, d);
        let list = f
            .derivative(&eta)
            .ok_or(SchauderError::MissingDerivatives {
                member: 0,
                eta: eta.to_string(),
            })?;
        deriv_sup_sum += sup_abs(list);
    }
    let pairs = PairGrid::full_closure(dom)?;
    let lhs = holder_quotient_values(f.values(), 1.0, &pairs)?;
    let c = c_omega(dom)?;
    let rhs = c * deriv_sup_sum;
    let holds = lhs <= rhs + 1e-6 * (1.0 + rhs);
    Ok(GradientBound { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid_domain, ShapeSpec};
    use crate::soperator::build_pair_grid;

    fn interval(h: f64) -> Arc<SampledDomain> {
        Arc::new(build_grid_domain(&ShapeSpec::Interval { a: 0.0, b: 1.0 }, h).unwrap())
    }

    fn square(h: f64) -> Arc<SampledDomain> {
        Arc::new(
            build_grid_domain(
                &ShapeSpec::Box {
                    bounds: vec![(0.0, 1.0), (0.0, 1.0)],
                },
                h,
            )
            .unwrap(),
        )
    }

    #[test]
    fn multi_index_enumeration() {
        let m = MultiIndex::all_of_order(2, 2);
        let strings: Vec<String> = m.iter().map(|e| e.to_string()).collect();
        assert_eq!(strings, vec!["0,2", "1,1", "2,0"]);
        assert!(m.iter().all(|e| e.order() == 2));
        assert_eq!("1,0".parse::<MultiIndex>().unwrap(), MultiIndex::axis(2, 0));
    }

    #[test]
    fn quotient_of_constant_is_zero() {
        let dom = interval(0.1);
        let pairs = build_pair_grid(&dom, 10_000, 0).unwrap();
        let f = SampledFunction::from_fn(dom, |_| 7.0);
        assert_eq!(holder_quotient(&f, 0.5, &pairs).unwrap(), 0.0);
    }

    #[test]
    fn quotient_of_identity_is_one_at_alpha_one() {
        let dom = interval(0.1);
        let pairs = build_pair_grid(&dom, 10_000, 0).unwrap();
        let f = SampledFunction::from_fn(dom, |p| p[0]);
        let q = holder_quotient(&f, 1.0, &pairs).unwrap();
        assert!((q - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn quotient_of_sqrt_matches_double_loop_oracle() {
        let dom = interval(0.01);
        let pairs = build_pair_grid(&dom, 1_000_000, 0).unwrap();
        let f = SampledFunction::from_fn(dom.clone(), |p| p[0].sqrt());
        let q = holder_quotient(&f, 0.5, &pairs).unwrap();
        // brute force over the same pairs
        let mut oracle = 0.0f64;
        for &(i, j) in pairs.pairs() {
            let num = (f.values()[i as usize] - f.values()[j as usize]).abs();
            let den = dom.distance(i as usize, j as usize).powf(0.5);
            oracle = oracle.max(num / den);
        }
        assert!((q - oracle).abs() <= 1e-12);
        // analytic sup of |sqrt x - sqrt y| / sqrt|x - y| on (0,1) is 1
        assert!(q <= 1.0 + 1e-9 && q > 0.95, "q = {q}");
    }

    #[test]
    fn empty_pair_set_rejected() {
        let dom = interval(0.1);
        let pairs = build_pair_grid(&dom, 10, 0).unwrap();
        let other = interval(0.2);
        let f = SampledFunction::from_fn(other, |p| p[0]);
        assert!(matches!(
            holder_quotient(&f, 0.5, &pairs),
            Err(SchauderError::DomainMismatch(_))
        ));
    }

    #[test]
    fn norms_of_constant() {
        let dom = interval(0.1);
        let pairs = build_pair_grid(&dom, 10_000, 0).unwrap();
        let mut f = SampledFunction::from_fn(dom, |_| -4.0);
        f = fd_derivatives(&f, 1).unwrap();
        let report = norms(&f, 1, 0.5, &pairs).unwrap();
        assert_eq!(report.sup_norm, 4.0);
        assert!((report.cm_norm - 4.0).abs() <= 1e-10);
        assert!(report.holder_quotients.values().all(|&q| q <= 1e-9));
        assert!((report.cmalpha_norm - 4.0).abs() <= 1e-9);
    }

    #[test]
    fn norms_of_identity_order_one() {
        let dom = interval(0.1);
        let pairs = build_pair_grid(&dom, 10_000, 0).unwrap();
        let f = SampledFunction::from_fn_with_gradient(dom, |p| p[0], |_, _| 1.0);
        let report = norms(&f, 1, 1.0, &pairs).unwrap();
        assert!((report.sup_norm - 1.0).abs() <= 1e-12);
        assert!((report.cm_norm - 2.0).abs() <= 1e-12);
        let q = report.holder_quotients.values().next().unwrap();
        assert!(q.abs() <= 1e-12, "derivative of identity is constant");
        assert!((report.cmalpha_norm - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn norm_report_consistency_invariant() {
        let dom = square(0.05);
        let pairs = build_pair_grid(&dom, 50_000, 3).unwrap();
        let f = SampledFunction::from_fn_with_gradient(
            dom,
            |p| (std::f64::consts::PI * p[0]).sin() * p[1],
            |p, d| {
                if d == 0 {
                    std::f64::consts::PI * (std::f64::consts::PI * p[0]).cos() * p[1]
                } else {
                    (std::f64::consts::PI * p[0]).sin()
                }
            },
        );
        let report = norms(&f, 1, 0.5, &pairs).unwrap();
        let rebuilt = report.cm_norm + report.holder_quotients.values().sum::<f64>();
        assert!((report.cmalpha_norm - rebuilt).abs() <= 1e-12);
        assert!(report.sup_norm >= 0.0 && report.cm_norm >= report.sup_norm);
    }

    #[test]
    fn norms_missing_derivatives_rejected() {
        let dom = interval(0.1);
        let pairs = build_pair_grid(&dom, 10_000, 0).unwrap();
        let f = SampledFunction::from_fn(dom, |p| p[0]);
        assert!(matches!(
            norms(&f, 1, 0.5, &pairs),
            Err(SchauderError::OrderUnavailable { .. })
        ));
    }

    #[test]
    fn basepoint_norm_examples() {
        let dom = interval(0.25);
        let pairs = build_pair_grid(&dom, 10_000, 0).unwrap();
        let zero = SampledFunction::from_fn(dom.clone(), |_| 0.0);
        assert_eq!(basepoint_norm(&zero, 0, 1.0, &pairs).unwrap(), 0.0);
        let ident = SampledFunction::from_fn(dom.clone(), |p| p[0]);
        let x0 = (0..dom.num_closure_points())
            .find(|&i| dom.point(i)[0] == 0.0)
            .unwrap();
        let b = basepoint_norm(&ident, x0, 1.0, &pairs).unwrap();
        assert!((b - 1.0).abs() <= 1e-12);
        assert!(matches!(
            basepoint_norm(&ident, 999, 1.0, &pairs),
            Err(SchauderError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn sandwich_inequality_on_random_polynomials() {
        // basepoint <= sup + quotient <= (1 + D^alpha) * basepoint,
        // quotients over the full closure pair set
        let dom = interval(0.05);
        let pairs = PairGrid::full_closure(&dom).unwrap();
        let alpha = 0.5;
        let diam_pow = dom.euclidean_diameter().powf(alpha);
        let polys: Vec<Box<dyn Fn(f64) -> f64>> = vec![
            Box::new(|x| 0.3 * x * x - x + 0.2),
            Box::new(|x| x * x * x - 0.5 * x),
            Box::new(|x| 2.0 * x - 1.0),
        ];
        for poly in polys {
            let f = SampledFunction::from_fn(dom.clone(), |p| poly(p[0]));
            let sup = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let q = holder_quotient(&f, alpha, &pairs).unwrap();
            for xbar in [0usize, dom.num_closure_points() - 1] {
                let b = basepoint_norm(&f, xbar, alpha, &pairs).unwrap();
                assert!(b <= sup + q + 1e-12);
                assert!(sup + q <= (1.0 + diam_pow) * b + 1e-12);
            }
        }
    }

    #[test]
    fn fd_exact_on_affine() {
        let dom = interval(0.1);
        let f = SampledFunction::from_fn(dom, |p| 3.0 * p[0] + 1.0);
        let g = fd_derivatives(&f, 1).unwrap();
        let d = g.derivative(&MultiIndex::axis(1, 0)).unwrap();
        for &v in d {
            assert!((v - 3.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn fd_exact_on_quadratics_everywhere() {
        let dom = interval(0.1);
        let f = SampledFunction::from_fn(dom.clone(), |p| p[0] * p[0]);
        let g = fd_derivatives(&f, 2).unwrap();
        let d1 = g.derivative(&MultiIndex::axis(1, 0)).unwrap();
        let d2 = g.derivative(&MultiIndex::new(vec![2])).unwrap();
        for i in 0..dom.num_closure_points() {
            let x = dom.point(i)[0];
            assert!((d1[i] - 2.0 * x).abs() <= 1e-10, "first at {x}");
            assert!((d2[i] - 2.0).abs() <= 1e-8, "second at {x}");
        }
    }

    #[test]
    fn fd_mixed_exact_on_xy() {
        let dom = square(0.25);
        let f = SampledFunction::from_fn(dom, |p| p[0] * p[1]);
        let g = fd_derivatives(&f, 2).unwrap();
        let dxy = g.derivative(&MultiIndex::new(vec![1, 1])).unwrap();
        for &v in dxy {
            assert!((v - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn fd_sine_error_small() {
        let dom = interval(0.01);
        let f = SampledFunction::from_fn(dom.clone(), |p| p[0].sin());
        let g = fd_derivatives(&f, 1).unwrap();
        let d = g.derivative(&MultiIndex::axis(1, 0)).unwrap();
        let mut worst = 0.0f64;
        for i in 0..dom.num_closure_points() {
            worst = worst.max((d[i] - dom.point(i)[0].cos()).abs());
        }
        assert!(worst <= 1e-3, "max error {worst}");
    }

    #[test]
    fn fd_unsupported_order() {
        let dom = interval(0.1);
        let f = SampledFunction::from_fn(dom, |p| p[0]);
        assert!(matches!(
            fd_derivatives(&f, 3),
            Err(SchauderError::UnsupportedOrder(3))
        ));
    }

    #[test]
    fn gradient_bound_on_linear_and_constant() {
        let dom = interval(0.05);
        let c = SampledFunction::from_fn_with_gradient(dom.clone(), |_| 5.0, |_, _| 0.0);
        let r = gradient_seminorm_check(&c, &dom).unwrap();
        assert!(r.holds && r.lhs == 0.0 && r.rhs == 0.0);
        let f = SampledFunction::from_fn_with_gradient(dom.clone(), |p| p[0], |_, _| 1.0);
        let r = gradient_seminorm_check(&f, &dom).unwrap();
        assert!(r.holds);
        assert!((r.lhs - 1.0).abs() <= 1e-12);
        assert!(r.rhs >= 1.0 - 1e-12);
    }

    #[test]
    fn gradient_bound_on_l_shape_product() {
        let dom = Arc::new(
            build_grid_domain(
                &ShapeSpec::LShape {
                    outer: vec![(0.0, 2.0), (0.0, 2.0)],
                    cut: vec![(1.0, 2.0), (0.0, 1.0)],
                },
                0.1,
            )
            .unwrap(),
        );
        let pi = std::f64::consts::PI;
        let f = SampledFunction::from_fn_with_gradient(
            dom.clone(),
            |p| (pi * p[0]).sin() * (pi * p[1]).cos(),
            |p, d| {
                if d == 0 {
                    pi * (pi * p[0]).cos() * (pi * p[1]).cos()
                } else {
                    -pi * (pi * p[0]).sin() * (pi * p[1]).sin()
                }
            },
        );
        let r = gradient_seminorm_check(&f, &dom).unwrap();
        assert!(r.holds, "lhs {} rhs {}", r.lhs, r.rhs);
        assert!(r.lhs > 0.0 && r.rhs > r.lhs);
    }

    #[test]
    fn gradient_bound_rejects_disconnected() {
        let spec = ShapeSpec::union_of_boxes(vec![vec![(0.0, 1.0)], vec![(2.0, 3.0)]]);
        let dom = Arc::new(build_grid_domain(&spec, 0.25).unwrap());
        let f = SampledFunction::from_fn_with_gradient(dom.clone(), |p| p[0], |_, _| 1.0);
        assert!(matches!(
            gradient_seminorm_check(&f, &dom),
            Err(SchauderError::COmegaInfinite)
        ));
    }

    #[test]
    fn quotient_homogeneity_and_subadditivity() {
        let dom = interval(0.05);
        let pairs = build_pair_grid(&dom, 100_000, 0).unwrap();
        let f = SampledFunction::from_fn(dom.clone(), |p| (5.0 * p[0]).sin());
        let g = SampledFunction::from_fn(dom.clone(), |p| p[0] * p[0] - 0.3);
        let lam = -2.5;
        let scaled = SampledFunction::from_fn(dom.clone(), |p| lam * (5.0 * p[0]).sin());
        let sum = SampledFunction::from_fn(dom.clone(), |p| {
            (5.0 * p[0]).sin() + p[0] * p[0] - 0.3
        });
        let qf = holder_quotient(&f, 0.5, &pairs).unwrap();
        let qg = holder_quotient(&g, 0.5, &pairs).unwrap();
        let qs = holder_quotient(&scaled, 0.5, &pairs).unwrap();
        let qsum = holder_quotient(&sum, 0.5, &pairs).unwrap();
        assert!((qs - lam.abs() * qf).abs() <= 1e-9 * (1.0 + qf));
        assert!(qsum <= qf + qg + 1e-9);
    }

    #[test]
    fn quotient_monotone_in_alpha_below_unit_separation() {
        // pairs on (0,1) all have |x-y| <= 1, so raising alpha can only
        // raise each quotient term
        let dom = interval(0.05);
        let pairs = build_pair_grid(&dom, 100_000, 0).unwrap();
        let f = SampledFunction::from_fn(dom, |p| (3.0 * p[0]).cos() * p[0]);
        let q3 = holder_quotient(&f, 0.3, &pairs).unwrap();
        let q7 = holder_quotient(&f, 0.7, &pairs).unwrap();
        let q10 = holder_quotient(&f, 1.0, &pairs).unwrap();
        assert!(q3 <= q7 + 1e-12 && q7 <= q10 + 1e-12);
    }
}

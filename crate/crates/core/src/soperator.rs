//! The difference-quotient transform S and the pair sets it lives on.
//!
//! S maps a function g on the domain closure to the bounded function
//! `S[g](x, y) = (g(x) - g(y)) / |x - y|^alpha` on ordered off-diagonal
//! point pairs. On a shared pair set, `sup |S[g]|` equals the sampled Holder
//! quotient of g exactly, which is the finite form of the seminorm isometry.

use std::collections::HashSet;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::SampledDomain;
use crate::error::{Result, SchauderError};
use crate::function::SampledFunction;
use crate::rng::SplitMix64;

/// Which point set the ordered pairs are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairScope {
    /// Interior points only: the off-diagonal product of the open domain,
    /// where the transform S is defined.
    Interior,
    /// All closure points: used for norms and base-point comparisons, where
    /// the quotient runs over the closed domain.
    Closure,
}

/// A finite sample of the off-diagonal product: ordered index pairs (i, j),
/// i != j, with cached separations. Both orientations of a pair may appear
/// and carry opposite S-values.
pub struct PairGrid {
    domain: Arc<SampledDomain>,
    scope: PairScope,
    pairs: Vec<(u32, u32)>,
    separations: Vec<f64>,
    budget: usize,
    seed: u64,
    min_separation: f64,
    // sep^alpha memoized per alpha; pair grids are shared across many
    // quotient evaluations and the powf pass dominates otherwise
    powered: RwLock<Vec<(u64, Arc<Vec<f64>>)>>,
}

impl std::fmt::Debug for PairGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PairGrid")
            .field("scope", &self.scope)
            .field("pairs", &self.pairs.len())
            .field("budget", &self.budget)
            .field("seed", &self.seed)
            .field("min_separation", &self.min_separation)
            .finish()
    }
}

impl PairGrid {
    pub fn domain(&self) -> &Arc<SampledDomain> {
        &self.domain
    }

    pub fn scope(&self) -> PairScope {
        self.scope
    }

    /// Ordered pairs of closure-point indices.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Euclidean separation of each pair, parallel to `pairs()`.
    pub fn separations(&self) -> &[f64] {
        &self.separations
    }

    /// Smallest sampled separation: nothing below this scale is witnessed.
    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `separations[p]^alpha` for every pair, memoized per alpha.
    pub fn powered_separations(&self, alpha: f64) -> Arc<Vec<f64>> {
        let key = alpha.to_bits();
        if let Some((_, v)) = self
            .powered
            .read()
            .expect("pair grid cache poisoned")
            .iter()
            .find(|(k, _)| *k == key)
        {
            return v.clone();
        }
        let computed: Vec<f64> = if alpha == 1.0 {
            self.separations.clone()
        } else {
            self.separations.par_iter().map(|s| s.powf(alpha)).collect()
        };
        let arc = Arc::new(computed);
        let mut guard = self.powered.write().expect("pair grid cache poisoned");
        if let Some((_, v)) = guard.iter().find(|(k, _)| *k == key) {
            return v.clone();
        }
        guard.push((key, arc.clone()));
        arc
    }

    /// All ordered pairs of closure points; the pair set for quotients over
    /// the closed domain.
    pub fn full_closure(domain: &Arc<SampledDomain>) -> Result<PairGrid> {
        let count = domain.num_closure_points();
        if count < 2 {
            return Err(SchauderError::DegenerateDomain(
                "need at least 2 closure points for a pair set".into(),
            ));
        }
        let indices: Vec<u32> = (0..count as u32).collect();
        let pairs = all_ordered_pairs(&indices);
        Ok(Self::assemble(
            domain.clone(),
            PairScope::Closure,
            pairs,
            count * (count - 1),
            0,
        ))
    }

    fn assemble(
        domain: Arc<SampledDomain>,
        scope: PairScope,
        pairs: Vec<(u32, u32)>,
        budget: usize,
        seed: u64,
    ) -> PairGrid {
        let separations: Vec<f64> = pairs
            .par_iter()
            .map(|&(i, j)| domain.distance(i as usize, j as usize))
            .collect();
        let min_separation = separations
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        PairGrid {
            domain,
            scope,
            pairs,
            separations,
            budget,
            seed,
            min_separation,
            powered: RwLock::new(Vec::new()),
        }
    }
}

fn all_ordered_pairs(indices: &[u32]) -> Vec<(u32, u32)> {
    let mut pairs = Vec::with_capacity(indices.len() * (indices.len() - 1));
    for &i in indices {
        for &j in indices {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Sample the ordered off-diagonal pairs of the interior points.
///
/// When the total count fits the budget every ordered pair is included.
/// Otherwise a seeded uniform subsample of size `budget` is drawn, always
/// containing each interior point's nearest-neighbor pair so the small
/// separations where Holder quotients concentrate stay represented.
pub fn build_pair_grid(
    dom: &Arc<SampledDomain>,
    budget: usize,
    seed: u64,
) -> Result<PairGrid> {
    let interior = dom.interior_indices();
    let m = interior.len();
    if m < 2 {
        return Err(SchauderError::DegenerateDomain(format!(
            "pair grid needs at least 2 interior points, have {m}"
        )));
    }
    if budget == 0 {
        return Err(SchauderError::InvalidParameter(
            "pair budget must be positive".into(),
        ));
    }
    let total = m * (m - 1);
    let idx: Vec<u32> = interior.iter().map(|&i| i as u32).collect();

    let pairs = if total <= budget {
        all_ordered_pairs(&idx)
    } else {
        // mandatory nearest-neighbor pairs, ties to the lowest index
        let mut chosen: HashSet<(u32, u32)> = HashSet::new();
        for (a, &i) in idx.iter().enumerate() {
            let mut best: Option<(f64, u32)> = None;
            for (b, &j) in idx.iter().enumerate() {
                if a == b {
                    continue;
                }
                let d = dom.distance(i as usize, j as usize);
                if best.map_or(true, |(bd, bj)| d < bd || (d == bd && j < bj)) {
                    best = Some((d, j));
                }
            }
            chosen.insert((i, best.expect("m >= 2").1));
        }
        // fill to the budget with seeded uniform draws over the ordered
        // pair space, skipping the diagonal by index arithmetic; if the
        // mandatory pairs already exceed the budget they are all kept
        let mut rng = SplitMix64::new(seed);
        while chosen.len() < budget && chosen.len() < total {
            let t = rng.next_below(total as u64) as usize;
            let a = t / (m - 1);
            let r = t % (m - 1);
            let b = if r < a { r } else { r + 1 };
            chosen.insert((idx[a], idx[b]));
        }
        let mut pairs: Vec<(u32, u32)> = chosen.into_iter().collect();
        pairs.sort_unstable();
        pairs
    };

    Ok(PairGrid::assemble(
        dom.clone(),
        PairScope::Interior,
        pairs,
        budget,
        seed,
    ))
}

/// The transform of one function: one value per ordered pair.
#[derive(Debug, Clone, Serialize)]
pub struct SFunction {
    pub values: Vec<f64>,
    pub alpha: f64,
}

impl SFunction {
    /// sup of |S[g]| over the pair set.
    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn s_values(values: &[f64], pairs: &PairGrid, alpha: f64) -> Vec<f64> {
    let powers = pairs.powered_separations(alpha);
    pairs
        .pairs()
        .par_iter()
        .zip(powers.par_iter())
        .map(|(&(i, j), &p)| (values[i as usize] - values[j as usize]) / p)
        .collect()
}

/// Evaluate `S[g](x_i, x_j) = (g(x_i) - g(x_j)) / |x_i - x_j|^alpha` on
/// every ordered pair of the grid.
pub fn s_transform(g: &SampledFunction, alpha: f64, pairs: &PairGrid) -> Result<SFunction> {
    check_alpha(alpha)?;
    check_same_domain(g, pairs)?;
    Ok(SFunction {
        values: s_values(g.values(), pairs, alpha),
        alpha,
    })
}

/// `| sup |S[g]| - |g|_alpha |` on a shared pair set. Both sides evaluate
/// the same quotients, so the defect is zero up to floating-point identity;
/// anything above 1e-12 indicates a broken pair set.
pub fn isometry_defect(g: &SampledFunction, alpha: f64, pairs: &PairGrid) -> Result<f64> {
    let s = s_transform(g, alpha, pairs)?;
    let quotient = crate::function::holder_quotient(g, alpha, pairs)?;
    Ok((s.sup() - quotient).abs())
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
        return Err(SchauderError::InvalidAlpha(alpha));
    }
    Ok(())
}

pub(crate) fn check_same_domain(g: &SampledFunction, pairs: &PairGrid) -> Result<()> {
    if g.domain().fingerprint() != pairs.domain().fingerprint() {
        return Err(SchauderError::DomainMismatch(
            "function and pair grid were sampled on different domains".into(),
        ));
    }
    Ok(())
}

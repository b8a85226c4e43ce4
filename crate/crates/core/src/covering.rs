//! Finite coverings of a sampled point set, oscillation of functions over
//! parts, and the preimage-ball refinement used to turn sup-norm nets into
//! equioscillating coverings.
//!
//! At the sampled level every subset of the finite ground set is admissible
//! as a part: the induced topology on a finite sample is discrete, so the
//! openness requirement on parts is vacuous here.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Result, SchauderError};

/// A finite covering of the ground set {0, ..., ground_set_size-1}: every
/// point belongs to at least one part and no part is empty. Parts may
/// overlap; coverings need not be partitions.
#[derive(Debug, Clone, Serialize)]
pub struct Covering {
    ground_set_size: usize,
    parts: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Covering {
    pub fn new(ground_set_size: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_labels(ground_set_size, parts, None)
    }

    pub fn with_labels(
        ground_set_size: usize,
        mut parts: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut covered = vec![false; ground_set_size];
        for part in &mut parts {
            if part.is_empty() {
                return Err(SchauderError::EmptyPart);
            }
            part.sort_unstable();
            part.dedup();
            for &p in part.iter() {
                if p >= ground_set_size {
                    return Err(SchauderError::IndexOutOfRange {
                        index: p,
                        count: ground_set_size,
                    });
                }
                covered[p] = true;
            }
        }
        if let Some(uncovered) = covered.iter().position(|&c| !c) {
            return Err(SchauderError::NotACovering(uncovered));
        }
        if let Some(l) = &labels {
            if l.len() != parts.len() {
                return Err(SchauderError::LengthMismatch {
                    expected: parts.len(),
                    actual: l.len(),
                });
            }
        }
        Ok(Covering {
            ground_set_size,
            parts,
            labels,
        })
    }

    pub fn ground_set_size(&self) -> usize {
        self.ground_set_size
    }

    /// Parts as sorted, deduplicated index lists.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// A net of open balls in R: centers spaced `radius` apart, so consecutive
/// balls overlap and cover the swept range.
#[derive(Debug, Clone, Serialize)]
pub struct RealBallNet {
    pub centers: Vec<f64>,
    pub radius: f64,
}

/// Centers `min + k * radius` until one reaches `max`: the balls
/// B(center, radius) cover [min f, max f].
pub fn range_ball_net(values: &[f64], radius: f64) -> Result<RealBallNet> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(SchauderError::InvalidParameter(format!(
            "ball radius {radius} must be finite and positive"
        )));
    }
    if values.is_empty() {
        return Err(SchauderError::EmptyFamily);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(SchauderError::NonFiniteInput {
            member: 0,
            position: 0,
        });
    }
    let mut centers = vec![lo];
    while *centers.last().expect("nonempty") < hi {
        centers.push(lo + centers.len() as f64 * radius);
    }
    Ok(RealBallNet { centers, radius })
}

/// Oscillation of `f_values` over `part`: max - min, the diameter of the
/// image set.
pub fn oscillation(f_values: &[f64], part: &[usize]) -> Result<f64> {
    if part.is_empty() {
        return Err(SchauderError::EmptyPart);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &p in part {
        let v = *f_values.get(p).ok_or(SchauderError::IndexOutOfRange {
            index: p,
            count: f_values.len(),
        })?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(hi - lo)
}

/// For each member f_i of the family, the covering of W by the nonempty
/// preimages of the open balls of a [`range_ball_net`] over f_i's range.
/// Every part of the i-th covering has oscillation of f_i below 2*radius.
pub fn preimage_ball_coverings(
    family_values: &[Vec<f64>],
    radius: f64,
) -> Result<Vec<Covering>> {
    if family_values.is_empty() {
        return Err(SchauderError::EmptyFamily);
    }
    let ground = family_values[0].len();
    let mut out = Vec::with_capacity(family_values.len());
    for (m, values) in family_values.iter().enumerate() {
        if values.len() != ground {
            return Err(SchauderError::MismatchedGroundSets(ground, values.len()));
        }
        let net = range_ball_net(values, radius).map_err(|e| match e {
            SchauderError::NonFiniteInput { position, .. } => SchauderError::NonFiniteInput {
                member: m,
                position,
            },
            other => other,
        })?;
        let mut parts = Vec::new();
        let mut labels = Vec::new();
        for (b, &center) in net.centers.iter().enumerate() {
            let part: Vec<usize> = (0..ground)
                .filter(|&w| (values[w] - center).abs() < radius)
                .collect();
            if !part.is_empty() {
                parts.push(part);
                labels.push(format!("f{m} ball {b} center {center}"));
            }
        }
        out.push(Covering::with_labels(ground, parts, Some(labels))?);
    }
    Ok(out)
}

/// The covering whose parts are all nonempty intersections obtained by
/// choosing one part from each input covering, deduplicated. With `minimal`
/// set, parts that are subsets of other parts are dropped as well; the
/// default keeps every nonempty intersection.
pub fn refine_by_intersection(coverings: &[Covering], minimal: bool) -> Result<Covering> {
    let first = coverings.first().ok_or(SchauderError::EmptyFamily)?;
    let ground = first.ground_set_size();
    for c in coverings {
        if c.ground_set_size() != ground {
            return Err(SchauderError::MismatchedGroundSets(
                ground,
                c.ground_set_size(),
            ));
        }
    }
    let mut acc: Vec<Vec<usize>> = first.parts().to_vec();
    for c in &coverings[1..] {
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for p in &acc {
            for q in c.parts() {
                let inter = intersect_sorted(p, q);
                if !inter.is_empty() && seen.insert(inter.clone()) {
                    next.push(inter);
                }
            }
        }
        acc = next;
    }
    // dedup the single-covering case too
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    acc.retain(|p| seen.insert(p.clone()));
    if minimal {
        acc = drop_subset_parts(acc);
    }
    Covering::new(ground, acc)
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn drop_subset_parts(parts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let keep: Vec<bool> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !parts.iter().enumerate().any(|(j, q)| {
                i != j
                    && p.len() <= q.len()
                    && (p.len() < q.len() || i > j)
                    && is_subset_sorted(p, q)
            })
        })
        .collect();
    parts
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

fn is_subset_sorted(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Result of checking `diam f(F) < eps` for every member over every part.
#[derive(Debug, Clone, Serialize)]
pub struct EquioscillationReport {
    pub holds: bool,
    /// (member index, part index, oscillation) of the largest oscillation.
    pub worst: Option<(usize, usize, f64)>,
    pub eps: f64,
}

/// Check that every family member oscillates strictly below `eps` on every
/// part of the covering.
pub fn equioscillation_check(
    family_values: &[Vec<f64>],
    covering: &Covering,
    eps: f64,
) -> EquioscillationReport {
    let mut worst: Option<(usize, usize, f64)> = None;
    for (m, values) in family_values.iter().enumerate() {
        for (p, part) in covering.parts().iter().enumerate() {
            let osc = oscillation(values, part).unwrap_or(f64::INFINITY);
            if worst.map_or(true, |(_, _, w)| osc > w) {
                worst = Some((m, p, osc));
            }
        }
    }
    EquioscillationReport {
        holds: worst.map_or(true, |(_, _, w)| w < eps),
        worst,
        eps,
    }
}

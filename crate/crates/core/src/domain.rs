//! Sampled bounded domains of R^n: grid rasterization, adjacency, geodesic
//! distances, and the quasiconvexity constant c[Omega].
//!
//! A domain is discretized on the global lattice `{ k*h : k in Z }^n`. A
//! lattice point belongs to the sampled closure when its closed grid cell
//! (the cube of half-width h/2 centered at the point) meets the closure of
//! the region; it is interior when it lies strictly inside the open region.
//! Adjacency connects lattice neighbors at Chebyshev distance 1 whose
//! connecting segment passes the midpoint membership test, so paths never
//! shortcut across excluded material. Discrete shortest paths overestimate
//! the continuous geodesic by at most the octile factor (<= 1.0824 in 2D),
//! which the callers' tolerances absorb.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SchauderError};

/// The worst-case overestimate of an 8-connected (3^n-1 in general) grid
/// path over the straight-line distance in an unobstructed region, for n = 2.
/// max over angles of (1 + (sqrt(2)-1) t) / sqrt(1 + t^2), attained at
/// t = sqrt(2) - 1.
pub const OCTILE_FACTOR_2D: f64 = 1.082_392_200_292_394;

/// Shape of a bounded open region of R^n, used to rasterize a
/// [`SampledDomain`].
#[derive(Clone)]
pub enum ShapeSpec {
    /// Open interval (a, b) in R^1.
    Interval { a: f64, b: f64 },
    /// Open axis-aligned box, one (lo, hi) pair per axis.
    Box { bounds: Vec<(f64, f64)> },
    /// Open box minus a closed corner box (e.g. (0,2)^2 minus [1,2]x[0,1]).
    /// The cut must share exactly one endpoint of the outer interval on
    /// every axis.
    LShape {
        outer: Vec<(f64, f64)>,
        cut: Vec<(f64, f64)>,
    },
    /// Open disc in R^2.
    Disc { center: [f64; 2], radius: f64 },
    /// Membership rule evaluated on grid points (and edge midpoints). The
    /// predicate decides the sampled set directly; interior points are those
    /// whose 2n axis neighbors at distance h are also members.
    PredicateGrid {
        bounds: Vec<(f64, f64)>,
        predicate: Arc<dyn Fn(&[f64]) -> bool + Send + Sync>,
    },
}

impl std::fmt::Debug for ShapeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShapeSpec::Interval { a, b } => write!(f, "Interval({a}, {b})"),
            ShapeSpec::Box { bounds } => write!(f, "Box({bounds:?})"),
            ShapeSpec::LShape { outer, cut } => write!(f, "LShape({outer:?} \\ {cut:?})"),
            ShapeSpec::Disc { center, radius } => write!(f, "Disc({center:?}, r={radius})"),
            ShapeSpec::PredicateGrid { bounds, .. } => {
                write!(f, "PredicateGrid({bounds:?}, <predicate>)")
            }
        }
    }
}

impl ShapeSpec {
    /// Union of axis-aligned open boxes, as a predicate grid. A point is a
    /// member when it lies in the closure of any box.
    pub fn union_of_boxes(boxes: Vec<Vec<(f64, f64)>>) -> ShapeSpec {
        let mut lo = vec![f64::INFINITY; boxes.first().map_or(0, Vec::len)];
        let mut hi = vec![f64::NEG_INFINITY; lo.len()];
        for b in &boxes {
            for (d, &(a, c)) in b.iter().enumerate() {
                lo[d] = lo[d].min(a);
                hi[d] = hi[d].max(c);
            }
        }
        let bounds: Vec<(f64, f64)> = lo.into_iter().zip(hi).collect();
        let boxes_cl = boxes;
        ShapeSpec::PredicateGrid {
            bounds,
            predicate: Arc::new(move |p: &[f64]| {
                boxes_cl.iter().any(|b| {
                    b.iter()
                        .zip(p)
                        .all(|(&(a, c), &x)| x >= a - 1e-12 && x <= c + 1e-12)
                })
            }),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ShapeSpec::Interval { .. } => 1,
            ShapeSpec::Box { bounds } => bounds.len(),
            ShapeSpec::LShape { outer, .. } => outer.len(),
            ShapeSpec::Disc { .. } => 2,
            ShapeSpec::PredicateGrid { bounds, .. } => bounds.len(),
        }
    }

    fn bounding_box(&self) -> Vec<(f64, f64)> {
        match self {
            ShapeSpec::Interval { a, b } => vec![(*a, *b)],
            ShapeSpec::Box { bounds } => bounds.clone(),
            ShapeSpec::LShape { outer, .. } => outer.clone(),
            ShapeSpec::Disc { center, radius } => center
                .iter()
                .map(|&c| (c - radius, c + radius))
                .collect(),
            ShapeSpec::PredicateGrid { bounds, .. } => bounds.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok_interval =
            |(a, b): &(f64, f64)| a.is_finite() && b.is_finite() && a < b;
        match self {
            ShapeSpec::Interval { a, b } => {
                if !ok_interval(&(*a, *b)) {
                    return Err(SchauderError::InvalidShape(format!(
                        "interval ({a}, {b}) is empty or unbounded"
                    )));
                }
            }
            ShapeSpec::Box { bounds } | ShapeSpec::PredicateGrid { bounds, .. } => {
                if bounds.is_empty() || !bounds.iter().all(ok_interval) {
                    return Err(SchauderError::InvalidShape(format!(
                        "bounds {bounds:?} do not define a nonempty bounded box"
                    )));
                }
            }
            ShapeSpec::LShape { outer, cut } => {
                if outer.is_empty() || !outer.iter().all(ok_interval) || !cut.iter().all(ok_interval)
                {
                    return Err(SchauderError::InvalidShape(
                        "l-shape bounds are empty or unbounded".into(),
                    ));
                }
                if outer.len() != cut.len() {
                    return Err(SchauderError::InvalidShape(
                        "l-shape outer and cut dimensions differ".into(),
                    ));
                }
                for (d, (&(o0, o1), &(c0, c1))) in outer.iter().zip(cut).enumerate() {
                    if c0 < o0 - 1e-12 || c1 > o1 + 1e-12 {
                        return Err(SchauderError::InvalidShape(format!(
                            "l-shape cut exceeds outer box on axis {d}"
                        )));
                    }
                    let touches_lo = (c0 - o0).abs() <= 1e-12;
                    let touches_hi = (c1 - o1).abs() <= 1e-12;
                    if touches_lo == touches_hi {
                        return Err(SchauderError::InvalidShape(format!(
                            "l-shape cut must share exactly one outer endpoint on axis {d}"
                        )));
                    }
                }
            }
            ShapeSpec::Disc { radius, .. } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(SchauderError::InvalidShape(format!(
                        "disc radius {radius} must be finite and positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Closed boxes whose union is the closure of the L-shape. On each axis
    /// the cut shares one outer endpoint; clipping the outer box on the
    /// opposite side of the cut's inner face gives one closed box per axis.
    fn lshape_closure_boxes(outer: &[(f64, f64)], cut: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
        let mut boxes = Vec::with_capacity(outer.len());
        for d in 0..outer.len() {
            let mut b = outer.to_vec();
            let (o0, o1) = outer[d];
            let (c0, c1) = cut[d];
            if (c1 - o1).abs() <= 1e-12 {
                // cut touches the max side: keep x_d <= c0
                b[d] = (o0, c0);
            } else {
                // cut touches the min side: keep x_d >= c1
                b[d] = (c1, o1);
            }
            boxes.push(b);
        }
        boxes
    }

    /// Does the open region contain `p` strictly? Comparisons carry a band
    /// of width `tol` so lattice points that are mathematically on the
    /// boundary are never misclassified as interior.
    pub fn contains_open(&self, p: &[f64], h: f64) -> bool {
        let tol = 1e-9 * h;
        let in_open_box = |bounds: &[(f64, f64)], p: &[f64]| {
            bounds
                .iter()
                .zip(p)
                .all(|(&(a, b), &x)| x > a + tol && x < b - tol)
        };
        match self {
            ShapeSpec::Interval { a, b } => in_open_box(&[(*a, *b)], p),
            ShapeSpec::Box { bounds } => in_open_box(bounds, p),
            ShapeSpec::LShape { outer, cut } => {
                let in_closed_cut = cut
                    .iter()
                    .zip(p)
                    .all(|(&(a, b), &x)| x >= a - tol && x <= b + tol);
                in_open_box(outer, p) && !in_closed_cut
            }
            ShapeSpec::Disc { center, radius } => {
                let d2: f64 = center
                    .iter()
                    .zip(p)
                    .map(|(&c, &x)| (x - c) * (x - c))
                    .sum();
                d2.sqrt() < radius - tol
            }
            ShapeSpec::PredicateGrid { predicate, .. } => {
                if !predicate(p) {
                    return false;
                }
                let n = p.len();
                let mut q = p.to_vec();
                for d in 0..n {
                    for s in [-1.0, 1.0] {
                        q[d] = p[d] + s * h;
                        if !predicate(&q) {
                            return false;
                        }
                    }
                    q[d] = p[d];
                }
                true
            }
        }
    }

    /// Does the closed cell of half-width `half` centered at `p` meet the
    /// closure of the region? This is the sampled-closure membership rule;
    /// it is also applied to edge midpoints (with the same half-width) so
    /// that the adjacency test is consistent with the point set it connects.
    pub fn cell_meets_closure(&self, p: &[f64], half: f64, h: f64) -> bool {
        let tol = 1e-9 * h;
        let cell_meets_box = |bounds: &[(f64, f64)], p: &[f64]| {
            bounds
                .iter()
                .zip(p)
                .all(|(&(a, b), &x)| x + half >= a - tol && x - half <= b + tol)
        };
        match self {
            ShapeSpec::Interval { a, b } => cell_meets_box(&[(*a, *b)], p),
            ShapeSpec::Box { bounds } => cell_meets_box(bounds, p),
            ShapeSpec::LShape { outer, cut } => Self::lshape_closure_boxes(outer, cut)
                .iter()
                .any(|b| cell_meets_box(b, p)),
            ShapeSpec::Disc { center, radius } => {
                // distance from the disc center to the cell cube
                let d2: f64 = center
                    .iter()
                    .zip(p)
                    .map(|(&c, &x)| {
                        let clamped = c.clamp(x - half, x + half);
                        (c - clamped) * (c - clamped)
                    })
                    .sum();
                d2.sqrt() <= radius + tol
            }
            ShapeSpec::PredicateGrid { predicate, .. } => predicate(p),
        }
    }
}

/// Undirected adjacency edge with its Euclidean length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// A discretized bounded domain: sampled closure points, the interior
/// subset, and the lattice adjacency graph whose shortest paths stand in
/// for geodesics.
#[derive(Debug)]
pub struct SampledDomain {
    dimension: usize,
    spacing: f64,
    /// Flat coordinates, `dimension` entries per closure point.
    coords: Vec<f64>,
    /// Flat lattice indices, parallel to `coords`.
    grid: Vec<i64>,
    lookup: HashMap<Vec<i64>, usize>,
    interior: Vec<bool>,
    interior_indices: Vec<usize>,
    edges: Vec<Edge>,
    neighbors: Vec<Vec<(usize, f64)>>,
    connected: bool,
    euclidean_diameter: f64,
    fingerprint: u64,
    c_omega_cache: OnceLock<f64>,
}

impl SampledDomain {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn num_closure_points(&self) -> usize {
        self.grid.len() / self.dimension.max(1)
    }

    pub fn num_interior_points(&self) -> usize {
        self.interior_indices.len()
    }

    /// Coordinates of closure point `i`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    /// Lattice indices of closure point `i`.
    pub fn grid_coords(&self, i: usize) -> &[i64] {
        &self.grid[i * self.dimension..(i + 1) * self.dimension]
    }

    /// Closure-point index of the lattice point with these indices, if sampled.
    pub fn lookup_grid(&self, coords: &[i64]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.interior[i]
    }

    /// Closure-point indices of the interior points, ascending.
    pub fn interior_indices(&self) -> &[usize] {
        &self.interior_indices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    pub fn connected(&self) -> bool {
        self.connected
    }

    pub fn euclidean_diameter(&self) -> f64 {
        self.euclidean_diameter
    }

    /// Euclidean distance between closure points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let p = self.point(i);
        let q = self.point(j);
        p.iter()
            .zip(q)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Structural hash of (dimension, spacing, coordinates); two domains
    /// with equal fingerprints carry the same sample points.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    fn check_index(&self, i: usize) -> Result<()> {
        let count = self.num_closure_points();
        if i >= count {
            return Err(SchauderError::IndexOutOfRange { index: i, count });
        }
        Ok(())
    }
}

fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Rasterize `spec` on the lattice of spacing `h`.
///
/// Closure points are lattice points whose closed grid cell meets the
/// closure of the region; interior points lie strictly inside the open
/// region. Adjacency connects lattice neighbors at Chebyshev distance 1
/// whose segment midpoint passes the same closure-membership test.
pub fn build_grid_domain(spec: &ShapeSpec, h: f64) -> Result<SampledDomain> {
    if !h.is_finite() || h <= 0.0 {
        return Err(SchauderError::InvalidSpacing(h));
    }
    spec.validate()?;
    let n = spec.dimension();
    let bb = spec.bounding_box();

    // lattice candidate ranges, one cell of slack on each side
    let ranges: Vec<(i64, i64)> = bb
        .iter()
        .map(|&(lo, hi)| {
            let k0 = ((lo - h) / h).floor() as i64 - 1;
            let k1 = ((hi + h) / h).ceil() as i64 + 1;
            (k0, k1)
        })
        .collect();

    let mut coords: Vec<f64> = Vec::new();
    let mut grid: Vec<i64> = Vec::new();
    let mut interior: Vec<bool> = Vec::new();
    let mut lookup: HashMap<Vec<i64>, usize> = HashMap::new();

    let mut k = ranges.iter().map(|&(k0, _)| k0).collect::<Vec<i64>>();
    let mut p = vec![0.0; n];
    'scan: loop {
        for d in 0..n {
            p[d] = k[d] as f64 * h;
        }
        if spec.cell_meets_closure(&p, h / 2.0, h) {
            let idx = interior.len();
            coords.extend_from_slice(&p);
            grid.extend_from_slice(&k);
            interior.push(spec.contains_open(&p, h));
            lookup.insert(k.clone(), idx);
        }
        // odometer increment over the candidate box
        let mut d = n;
        loop {
            if d == 0 {
                break 'scan;
            }
            d -= 1;
            k[d] += 1;
            if k[d] <= ranges[d].1 {
                break;
            }
            k[d] = ranges[d].0;
        }
    }

    let count = interior.len();
    if count == 0 {
        return Err(SchauderError::ResolutionTooCoarse(h));
    }

    let interior_indices: Vec<usize> =
        (0..count).filter(|&i| interior[i]).collect();

    // Chebyshev-1 neighbors; enumerate only the lexicographically positive
    // half of the offsets so each undirected edge appears once.
    let offsets: Vec<Vec<i64>> = {
        let mut all = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for prefix in &all {
                for s in [-1i64, 0, 1] {
                    let mut o = prefix.clone();
                    o.push(s);
                    next.push(o);
                }
            }
            all = next;
        }
        all.into_iter()
            .filter(|o| o.iter().any(|&s| s != 0))
            .filter(|o| {
                o.iter().find(|&&s| s != 0).copied().unwrap_or(0) > 0
            })
            .collect()
    };

    let mut edges: Vec<Edge> = Vec::new();
    let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
    let mut ncoords = vec![0i64; n];
    let mut mid = vec![0.0; n];
    for i in 0..count {
        let gi = &grid[i * n..(i + 1) * n];
        let pi = &coords[i * n..(i + 1) * n];
        for off in &offsets {
            for d in 0..n {
                ncoords[d] = gi[d] + off[d];
            }
            let Some(&j) = lookup.get(&ncoords) else {
                continue;
            };
            let pj = &coords[j * n..(j + 1) * n];
            for d in 0..n {
                mid[d] = 0.5 * (pi[d] + pj[d]);
            }
            if !spec.cell_meets_closure(&mid, h / 2.0, h) {
                continue;
            }
            let length = pi
                .iter()
                .zip(pj)
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            edges.push(Edge { a: i, b: j, length });
            neighbors[i].push((j, length));
            neighbors[j].push((i, length));
        }
    }
    for nb in &mut neighbors {
        nb.sort_by_key(|&(j, _)| j);
    }

    // connectivity by breadth-first search
    let connected = {
        let mut seen = vec![false; count];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == count
    };

    let euclidean_diameter = (0..count)
        .into_par_iter()
        .map(|i| {
            let pi = &coords[i * n..(i + 1) * n];
            let mut best = 0.0f64;
            for j in (i + 1)..count {
                let pj = &coords[j * n..(j + 1) * n];
                let d2: f64 = pi
                    .iter()
                    .zip(pj)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum();
                best = best.max(d2);
            }
            best
        })
        .reduce(|| 0.0, f64::max)
        .sqrt();

    let fingerprint = fnv1a64(
        (n as u64)
            .to_le_bytes()
            .into_iter()
            .chain(h.to_bits().to_le_bytes())
            .chain(coords.iter().flat_map(|c| c.to_bits().to_le_bytes())),
    );

    Ok(SampledDomain {
        dimension: n,
        spacing: h,
        coords,
        grid,
        lookup,
        interior,
        interior_indices,
        edges,
        neighbors,
        connected,
        euclidean_diameter,
        fingerprint,
        c_omega_cache: OnceLock::new(),
    })
}

/// Shortest-path distances from `src` to every closure point over the
/// adjacency graph; `f64::INFINITY` for unreachable points.
pub fn geodesic_distances_from(dom: &SampledDomain, src: usize) -> Result<Vec<f64>> {
    dom.check_index(src)?;
    Ok(dijkstra(dom, src, None))
}

fn dijkstra(dom: &SampledDomain, src: usize, stop_at: Option<usize>) -> Vec<f64> {
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;

    #[derive(PartialEq)]
    struct State {
        cost: f64,
        node: usize,
    }
    impl Eq for State {}
    impl Ord for State {
        fn cmp(&self, other: &Self) -> Ordering {
            // reversed for a min-heap; ties broken by node for determinism
            other
                .cost
                .partial_cmp(&self.cost)
                .unwrap_or(Ordering::Equal)
                .then_with(|| other.node.cmp(&self.node))
        }
    }
    impl PartialOrd for State {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    let count = dom.num_closure_points();
    let mut dist = vec![f64::INFINITY; count];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(State { cost: 0.0, node: src });
    while let Some(State { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        if stop_at == Some(node) {
            break;
        }
        for &(next, w) in dom.neighbors(node) {
            let c = cost + w;
            if c < dist[next] {
                dist[next] = c;
                heap.push(State { cost: c, node: next });
            }
        }
    }
    dist
}

/// Geodesic distance lambda(x_i, x_j): length of the shortest adjacency
/// path between closure points `i` and `j`.
pub fn geodesic_distance(dom: &SampledDomain, i: usize, j: usize) -> Result<f64> {
    dom.check_index(i)?;
    dom.check_index(j)?;
    if i == j {
        return Ok(0.0);
    }
    let dist = dijkstra(dom, i, Some(j));
    if dist[j].is_finite() {
        Ok(dist[j])
    } else {
        Err(SchauderError::NoConnectingPath(i, j))
    }
}

/// Estimated quasiconvexity constant: the maximum over sampled closure-point
/// pairs of lambda(x, y) / |x - y|. Returns `f64::INFINITY` for a
/// disconnected domain. Because pairs are sampled and lambda carries the
/// octile overestimate, the value is an estimate of the continuous supremum.
pub fn c_omega(dom: &SampledDomain) -> Result<f64> {
    let count = dom.num_closure_points();
    if count < 2 {
        return Err(SchauderError::DegenerateDomain(format!(
            "c[Omega] needs at least 2 closure points, have {count}"
        )));
    }
    if let Some(&v) = dom.c_omega_cache.get() {
        return Ok(v);
    }
    if !dom.connected() {
        let _ = dom.c_omega_cache.set(f64::INFINITY);
        return Ok(f64::INFINITY);
    }
    let value = (0..count)
        .into_par_iter()
        .map(|i| {
            let lambda = dijkstra(dom, i, None);
            let mut best = 0.0f64;
            for j in (i + 1)..count {
                let e = dom.distance(i, j);
                if e > 0.0 {
                    best = best.max(lambda[j] / e);
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    let _ = dom.c_omega_cache.set(value);
    Ok(value)
}

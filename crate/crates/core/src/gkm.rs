//! Torus fixed-point data: projective space with its neighbor weights, a
//! split line bundle sum with its fixed-point weights, and the seeded generic
//! rational specializations that stand in for the symbolic weights.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{fmt_q, parse_q, product, q, Q};
use crate::error::{Error, Result};

/// Whether the bundle is `⊕ O(-a_k)` (concave) or `⊕ O(a_k)` (convex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// Negative line bundles; the local Calabi–Yau case.
    Concave,
    /// Positive line bundles; the hypersurface case.
    Convex,
}

impl Sign {
    /// `-1` for concave, `+1` for convex.
    pub fn factor(self) -> i64 {
        match self {
            Sign::Concave => -1,
            Sign::Convex => 1,
        }
    }

    /// Lowercase name used in JSON/CSV.
    pub fn name(self) -> &'static str {
        match self {
            Sign::Concave => "concave",
            Sign::Convex => "convex",
        }
    }
}

/// Rational values for the torus weights `α_1..α_n`, with the seed that
/// produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    /// `α_1..α_n`.
    pub alpha: Vec<Q>,
    /// The seed this specialization was drawn from.
    pub seed: u64,
}

/// Base genericity: all `α_i` nonzero and distinct, and the differences
/// `α_i - α_j` over unordered pairs nonzero and pairwise distinct up to sign.
pub fn is_generic(alpha: &[Q]) -> bool {
    if alpha.iter().any(|a| a.is_zero()) {
        return false;
    }
    let mut diffs: Vec<Q> = Vec::new();
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            let d = (&alpha[i] - &alpha[j]).abs();
            if d.is_zero() || diffs.contains(&d) {
                return false;
            }
            diffs.push(d);
        }
    }
    true
}

/// Bundle genericity on top of [`is_generic`]: every `a_k α_i` is nonzero,
/// differs from `a_{k'} α_{i'}` for `i ≠ i'`, and differs in absolute value
/// from every `α_i - α_j`.
pub fn is_generic_for_bundle(alpha: &[Q], a: &[u32]) -> bool {
    if !is_generic(alpha) {
        return false;
    }
    let mut scaled: Vec<(usize, Q)> = Vec::new();
    for (i, al) in alpha.iter().enumerate() {
        for &ak in a {
            scaled.push((i, al * q(ak as i64)));
        }
    }
    for (i, x) in &scaled {
        if x.is_zero() {
            return false;
        }
        if scaled.iter().any(|(j, y)| j != i && y == x) {
            return false;
        }
        for u in alpha {
            for v in alpha {
                if (u - v).abs() == x.abs() {
                    return false;
                }
            }
        }
    }
    true
}

fn rng_for(n: usize, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 56) ^ 0x5eed_0000_0000_0000)
}

fn draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    let range = 6 * n as i64 + 9;
    (0..n).map(|_| q(rng.gen_range(-range..=range))).collect()
}

/// A deterministic generic specialization for `P^{n-1}`: small nonzero
/// integers satisfying [`is_generic`], resampled until they do.
pub fn random_specialization(n: usize, seed: u64) -> Specialization {
    let mut rng = rng_for(n, seed);
    loop {
        let alpha = draw(&mut rng, n);
        if is_generic(&alpha) {
            return Specialization { alpha, seed };
        }
    }
}

/// Like [`random_specialization`] but also satisfying the bundle
/// constraints of [`is_generic_for_bundle`] for degrees `a`.
pub fn random_specialization_for(n: usize, a: &[u32], seed: u64) -> Specialization {
    let mut rng = rng_for(n, seed);
    loop {
        let alpha = draw(&mut rng, n);
        if is_generic_for_bundle(&alpha, a) {
            return Specialization { alpha, seed };
        }
    }
}

impl Specialization {
    /// Wrap explicit weights, checking [`is_generic`].
    pub fn new(alpha: Vec<Q>, seed: u64) -> Result<Self> {
        if !is_generic(&alpha) {
            return Err(Error::Degenerate(format!(
                "weights ({}) violate genericity",
                alpha.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(Specialization { alpha, seed })
    }
}

/// The fixed-point graph of a GKM manifold with specialized weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmSpace {
    n_points: usize,
    dim: usize,
    neighbors: Vec<Vec<usize>>,
    weights: BTreeMap<(usize, usize), Q>,
    alpha: Option<Vec<Q>>,
}

impl GkmSpace {
    /// General input: `edges` lists `(i, j, α_{i,j})` once per unordered
    /// pair; antisymmetry fills in `α_{j,i}`. Weights at each fixed point
    /// must be nonzero and pairwise distinct.
    pub fn from_edges(n_points: usize, edges: &[(usize, usize, Q)]) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); n_points];
        let mut weights = BTreeMap::new();
        for (i, j, w) in edges {
            if *i >= n_points || *j >= n_points || i == j {
                return Err(Error::InvalidInput(format!("bad GKM edge ({i}, {j})")));
            }
            if weights.contains_key(&(*i, *j)) {
                return Err(Error::InvalidInput(format!(
                    "duplicate GKM edge ({i}, {j})"
                )));
            }
            neighbors[*i].push(*j);
            neighbors[*j].push(*i);
            weights.insert((*i, *j), w.clone());
            weights.insert((*j, *i), -w.clone());
        }
        let mut dims = neighbors.iter().map(|v| v.len());
        let dim = dims.next().unwrap_or(0);
        if dims.any(|d| d != dim) {
            return Err(Error::InvalidInput(
                "fixed points have different valences".into(),
            ));
        }
        for (i, nb) in neighbors.iter_mut().enumerate() {
            nb.sort_unstable();
            let ws: Vec<&Q> = nb.iter().map(|j| &weights[&(i, *j)]).collect();
            for (a, wa) in ws.iter().enumerate() {
                if wa.is_zero() || ws[a + 1..].contains(wa) {
                    return Err(Error::Degenerate(format!(
                        "weights at fixed point {i} not pairwise distinct"
                    )));
                }
            }
        }
        Ok(GkmSpace {
            n_points,
            dim,
            neighbors,
            weights,
            alpha: None,
        })
    }

    /// Number of fixed points.
    pub fn n_fixed(&self) -> usize {
        self.n_points
    }

    /// Complex dimension (`n - 1` for `P^{n-1}`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Neighbors of fixed point `i` in increasing order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// `α_{i,j}` for adjacent `i, j`.
    pub fn weight(&self, i: usize, j: usize) -> &Q {
        self.weights
            .get(&(i, j))
            .unwrap_or_else(|| panic!("fixed points {i} and {j} are not adjacent"))
    }

    /// True when `i` and `j` are joined by an invariant line.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.weights.contains_key(&(i, j))
    }

    /// The underlying `α_i` when the space was built as projective space.
    pub fn alphas(&self) -> Option<&[Q]> {
        self.alpha.as_deref()
    }
}

/// `P^{n-1}` with fixed points `P_1..P_n` (indexed from zero), every pair
/// adjacent, `α_{i,j} = α_i - α_j`.
pub fn projective_space(n: usize, spec: &Specialization) -> Result<GkmSpace> {
    if n < 2 {
        return Err(Error::InvalidInput("projective space needs n >= 2".into()));
    }
    if spec.alpha.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} weights, got {}",
            spec.alpha.len()
        )));
    }
    if !is_generic(&spec.alpha) {
        return Err(Error::Degenerate(
            "specialization violates genericity; resample".into(),
        ));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, &spec.alpha[i] - &spec.alpha[j]));
        }
    }
    let mut space = GkmSpace::from_edges(n, &edges)?;
    space.alpha = Some(spec.alpha.clone());
    Ok(space)
}

/// The weights of a split bundle at every fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalBundle {
    degrees: Vec<u32>,
    sign: Sign,
    eps: Vec<Vec<Q>>,
}

impl LocalBundle {
    /// Weights `ε_{i,k} = ∓ a_k α_i` for the projective-space linearization.
    pub fn from_alphas(alpha: &[Q], a: &[u32], sign: Sign) -> Result<Self> {
        if a.is_empty() || a.contains(&0) {
            return Err(Error::InvalidInput(
                "bundle degrees must be positive".into(),
            ));
        }
        let eps: Vec<Vec<Q>> = alpha
            .iter()
            .map(|al| {
                a.iter()
                    .map(|&ak| al * q(sign.factor() * ak as i64))
                    .collect()
            })
            .collect();
        if eps.iter().flatten().any(|e| e.is_zero()) {
            return Err(Error::Degenerate(
                "a bundle weight vanishes; resample".into(),
            ));
        }
        Ok(LocalBundle {
            degrees: a.to_vec(),
            sign,
            eps,
        })
    }

    /// Degrees `a_1..a_l`.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Rank `l`.
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Concave or convex.
    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// `ε_{i,1..l}`.
    pub fn eps(&self, i: usize) -> &[Q] {
        &self.eps[i]
    }
}

/// Attach a split bundle of degrees `a` to a projective space.
pub fn with_bundle(space: &GkmSpace, a: &[u32], sign: Sign) -> Result<LocalBundle> {
    let alpha = space.alphas().ok_or_else(|| {
        Error::InvalidInput("bundle linearization needs projective-space weights".into())
    })?;
    LocalBundle::from_alphas(alpha, a, sign)
}

/// Restrictions `μ|_{P_i}` of an equivariant class to every fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionClass {
    /// One value per fixed point.
    pub restrictions: Vec<Q>,
}

impl InsertionClass {
    /// The unit class.
    pub fn identity(n: usize) -> Self {
        InsertionClass {
            restrictions: vec![Q::one(); n],
        }
    }

    /// `x^p` where `x` is the equivariant hyperplane class, `x|_{P_i} = α_i`.
    pub fn hyperplane_power(alpha: &[Q], p: u32) -> Self {
        InsertionClass {
            restrictions: alpha
                .iter()
                .map(|a| num_traits::pow(a.clone(), p as usize))
                .collect(),
        }
    }

    /// The equivariant point class `φ_i = Π_{j≠i}(x - α_j)`.
    pub fn point_class(alpha: &[Q], i: usize) -> Self {
        let restrictions = (0..alpha.len())
            .map(|k| {
                let factors: Vec<Q> = (0..alpha.len())
                    .filter(|&j| j != i)
                    .map(|j| &alpha[k] - &alpha[j])
                    .collect();
                product(&factors)
            })
            .collect();
        InsertionClass { restrictions }
    }

    /// `μ|_{P_i}`.
    pub fn at(&self, i: usize) -> &Q {
        &self.restrictions[i]
    }
}

/// A specialization-independent description of a primary insertion,
/// resolved to an [`InsertionClass`] once weights are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InsertionSpec {
    /// The unit class.
    Identity,
    /// `x^p`, powers of the equivariant hyperplane class.
    HyperplanePower(u32),
    /// The equivariant class of the fixed point `P_i` (zero-indexed).
    PointClass(usize),
}

impl InsertionSpec {
    /// Restrictions under the given weights.
    pub fn resolve(&self, alpha: &[Q]) -> InsertionClass {
        match self {
            InsertionSpec::Identity => InsertionClass::identity(alpha.len()),
            InsertionSpec::HyperplanePower(p) => InsertionClass::hyperplane_power(alpha, *p),
            InsertionSpec::PointClass(i) => InsertionClass::point_class(alpha, *i),
        }
    }
}

/// A local space `Tot(E → P^{n-1})` under one specialization.
#[derive(Clone, Debug)]
pub struct LocalSpace {
    /// Fixed-point graph.
    pub space: GkmSpace,
    /// Bundle weights.
    pub bundle: LocalBundle,
    /// The weights used.
    pub spec: Specialization,
}

impl LocalSpace {
    /// `Tot(⊕ O(∓a_k) → P^{n-1})` at an explicit specialization.
    pub fn from_spec(n: usize, a: &[u32], sign: Sign, spec: Specialization) -> Result<Self> {
        let space = projective_space(n, &spec)?;
        let bundle = with_bundle(&space, a, sign)?;
        Ok(LocalSpace {
            space,
            bundle,
            spec,
        })
    }

    /// `Tot(⊕ O(∓a_k) → P^{n-1})` at the seeded generic specialization.
    pub fn projective(n: usize, a: &[u32], sign: Sign, seed: u64) -> Result<Self> {
        LocalSpace::from_spec(n, a, sign, random_specialization_for(n, a, seed))
    }

    /// `n` (number of fixed points).
    pub fn n(&self) -> usize {
        self.space.n_fixed()
    }

    /// Bundle rank `l`.
    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    /// Bundle degrees.
    pub fn degrees(&self) -> &[u32] {
        self.bundle.degrees()
    }

    /// Concave or convex.
    pub fn sign(&self) -> Sign {
        self.bundle.sign()
    }

    /// `Σ a_k = n`.
    pub fn is_calabi_yau(&self) -> bool {
        self.degrees().iter().map(|&a| a as usize).sum::<usize>() == self.n()
    }

    /// `α_{i,j}`.
    pub fn alpha(&self, i: usize, j: usize) -> &Q {
        self.space.weight(i, j)
    }

    /// `α_i` itself.
    pub fn alpha_i(&self, i: usize) -> &Q {
        &self.spec.alpha[i]
    }

    /// `ε_{i,k}`.
    pub fn eps(&self, i: usize) -> &[Q] {
        self.bundle.eps(i)
    }

    /// Tangent weights `α_{i,j}`, `j ∈ Nb(P_i)`.
    pub fn tangent_weights(&self, i: usize) -> Vec<Q> {
        self.space
            .neighbors(i)
            .iter()
            .map(|&j| self.alpha(i, j).clone())
            .collect()
    }

    /// Chern roots of `TX` at `P_i` (bundle weights then tangent weights).
    pub fn chern_roots(&self, i: usize) -> Vec<Q> {
        let mut r = self.eps(i).to_vec();
        r.extend(self.tangent_weights(i));
        r
    }

    /// `Π_k ε_{i,k} · Π_{Nb} α_{i,j}`, the genus-zero vertex prefactor base in
    /// the concave case.
    pub fn euler_product(&self, i: usize) -> Q {
        product(&self.chern_roots(i))
    }

    /// Serializable description `{n, alphas, bundle: {a, sign}}`.
    pub fn description(&self) -> GkmDescription {
        GkmDescription {
            n: self.n(),
            alphas: self.spec.alpha.iter().map(fmt_q).collect(),
            bundle: BundleDescription {
                a: self.degrees().to_vec(),
                sign: self.sign(),
            },
        }
    }
}

/// JSON form of a local projective space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkmDescription {
    /// Number of homogeneous coordinates.
    pub n: usize,
    /// Specialized weights as `"p/q"` strings.
    pub alphas: Vec<String>,
    /// Bundle data.
    pub bundle: BundleDescription,
}

/// JSON form of a split bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDescription {
    /// Degrees `a_k`.
    pub a: Vec<u32>,
    /// Concave or convex.
    pub sign: Sign,
}

impl GkmDescription {
    /// Rebuild the local space (seed recorded as zero).
    pub fn to_local_space(&self) -> Result<LocalSpace> {
        let alpha = self
            .alphas
            .iter()
            .map(|s| parse_q(s))
            .collect::<Result<Vec<_>>>()?;
        if alpha.len() != self.n {
            return Err(Error::InvalidInput("alphas length differs from n".into()));
        }
        LocalSpace::from_spec(
            self.n,
            &self.bundle.a,
            self.bundle.sign,
            Specialization::new(alpha, 0)?,
        )
    }

    /// Serialize to JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// Parse from JSON.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("GKM JSON: {e}")))
    }
}

/// Derived seed for the `attempt`-th respecialization of `seed`.
pub fn retry_seed(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Run `f` on the local space built from `seed`, moving on to derived seeds
/// while `f` reports a degenerate specialization. Returns the value and the
/// seed that finally succeeded.
pub fn with_respecialization<T>(
    n: usize,
    a: &[u32],
    sign: Sign,
    seed: u64,
    mut f: impl FnMut(&LocalSpace) -> Result<T>,
) -> Result<(T, u64)> {
    const MAX_ATTEMPTS: u64 = 64;
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let s = retry_seed(seed, attempt);
        let outcome = LocalSpace::projective(n, a, sign, s).and_then(|ls| f(&ls));
        match outcome {
            Ok(v) => return Ok((v, s)),
            Err(e) if e.is_degenerate() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Degenerate("no generic specialization found".into())))
}

//! Magic functions and the left inverses built from them.
//!
//! A magic function is the two-variable rational inner function
//!
//! ```text
//! Φ_{s,η}(z₁, z₂) = (s z₁ + (1−s) z₂ + η̄ z₁z₂) / (1 + ((1−s) z₁ + s z₂) η̄)
//! ```
//!
//! normalized so that, with `η = (α₁ − α₂)/(ᾱ₁ − ᾱ₂)`,
//! `Φ_{s,η}(λm_{α₁}(λ), λm_{α₂}(λ)) = λ m_{sα₁+(1−s)α₂}(λ)`. Nesting these
//! along a binary tree gives a left inverse of a 3-complex geodesic.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::unit;
use crate::problem::PolydiscPoint;
use crate::tolerances;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagicParams {
    pub s: f64,
    pub eta: Complex64,
}

impl MagicParams {
    pub fn new(s: f64, eta: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameters(format!("magic weight s = {s} outside [0, 1]")));
        }
        if (eta.norm() - 1.0).abs() > tolerances::IDENTITY {
            return Err(Error::InvalidParameters(format!("magic parameter η = {eta} not unimodular")));
        }
        Ok(Self { s, eta })
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        magic_eval(self, z1, z2)
    }
}

pub fn magic_eval(p: &MagicParams, z1: Complex64, z2: Complex64) -> Complex64 {
    let (s, e) = (p.s, p.eta.conj());
    (z1 * s + z2 * (1.0 - s) + e * z1 * z2) / (ONE + (z1 * (1.0 - s) + z2 * s) * e)
}

/// `(α₁ − α₂)/(ᾱ₁ − ᾱ₂)`.
pub fn eta_for(a1: Complex64, a2: Complex64) -> Result<Complex64> {
    let d = a1 - a2;
    if d.norm() == 0.0 {
        return Err(Error::EqualAlphas);
    }
    Ok(unit(d * d))
}

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some(v) = t.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::InvalidWeights(format!("negative weight {v}")));
        }
        let sum: f64 = t.iter().sum();
        if (sum - 1.0).abs() > tolerances::SIMPLEX_EPS {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(Self(t))
    }

    /// Clamps negatives to zero and rescales to unit sum.
    pub fn normalized(t: &[f64]) -> Result<Self> {
        let clamped: Vec<f64> = t.iter().map(|v| v.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::InvalidWeights("weights have no positive part".into()));
        }
        Ok(Self(clamped.iter().map(|v| v / sum).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `t · α`.
    pub fn combine(&self, alpha: &[Complex64]) -> Complex64 {
        self.0.iter().zip(alpha).map(|(t, a)| a * *t).sum()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Shape of the composition tree, before zero-weight leaves are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf(usize),
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn node(l: Shape, r: Shape) -> Self {
        Shape::Node(Box::new(l), Box::new(r))
    }

    fn leftmost(&self) -> usize {
        match self {
            Shape::Leaf(v) => *v,
            Shape::Node(l, _) => l.leftmost(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Association {
    /// `(((z₁, z₂), z₃), …)`
    #[default]
    LeftComb,
    /// `(z₁, (z₂, (z₃, …)))`
    RightComb,
    Explicit(Shape),
}

impl Association {
    fn shape(&self, n: usize) -> Shape {
        match self {
            Association::LeftComb => (1..n).fold(Shape::Leaf(0), |acc, k| Shape::node(acc, Shape::Leaf(k))),
            Association::RightComb => {
                (0..n - 1).rev().fold(Shape::Leaf(n - 1), |acc, k| Shape::node(Shape::Leaf(k), acc))
            }
            Association::Explicit(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CompositionTree {
    Leaf { var: usize },
    Node { params: MagicParams, left: Box<CompositionTree>, right: Box<CompositionTree> },
}

impl CompositionTree {
    pub fn eval(&self, v: &[Complex64]) -> Complex64 {
        match self {
            CompositionTree::Leaf { var } => v[*var],
            CompositionTree::Node { params, left, right } => params.eval(left.eval(v), right.eval(v)),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            CompositionTree::Leaf { var } => vec![*var],
            CompositionTree::Node { left, right, .. } => {
                let mut out = left.leaves();
                out.extend(right.leaves());
                out
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            CompositionTree::Leaf { .. } => 0,
            CompositionTree::Node { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    /// Mutable visit of every node's parameters, in pre-order.
    pub fn params_mut(&mut self) -> Vec<&mut MagicParams> {
        match self {
            CompositionTree::Leaf { .. } => vec![],
            CompositionTree::Node { params, left, right } => {
                let mut out = vec![params];
                out.extend(left.params_mut());
                out.extend(right.params_mut());
                out
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TreeJson {
    Node { s: f64, eta_re: f64, eta_im: f64, left: Box<TreeJson>, right: Box<TreeJson> },
    Leaf { var: usize },
}

impl From<&CompositionTree> for TreeJson {
    fn from(t: &CompositionTree) -> Self {
        match t {
            CompositionTree::Leaf { var } => TreeJson::Leaf { var: *var },
            CompositionTree::Node { params, left, right } => TreeJson::Node {
                s: params.s,
                eta_re: params.eta.re,
                eta_im: params.eta.im,
                left: Box::new(left.as_ref().into()),
                right: Box::new(right.as_ref().into()),
            },
        }
    }
}

impl TryFrom<TreeJson> for CompositionTree {
    type Error = Error;
    fn try_from(t: TreeJson) -> Result<Self> {
        Ok(match t {
            TreeJson::Leaf { var } => CompositionTree::Leaf { var },
            TreeJson::Node { s, eta_re, eta_im, left, right } => CompositionTree::Node {
                params: MagicParams::new(s, Complex64::new(eta_re, eta_im))?,
                left: Box::new((*left).try_into()?),
                right: Box::new((*right).try_into()?),
            },
        })
    }
}

impl Serialize for CompositionTree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TreeJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CompositionTree {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        TreeJson::deserialize(deserializer)?.try_into().map_err(serde::de::Error::custom)
    }
}

/// `F(z) = tree(r ⊙ (z_{π(0)}, …, z_{π(n−1)}))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalInnerFunction {
    pub tree: CompositionTree,
    pub pre_rotations: Vec<Complex64>,
    pub permutation: Vec<usize>,
}

impl RationalInnerFunction {
    pub fn new(tree: CompositionTree, pre_rotations: Vec<Complex64>, permutation: Vec<usize>) -> Result<Self> {
        let n = pre_rotations.len();
        if permutation.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: permutation.len() });
        }
        let mut seen = vec![false; n];
        for &p in &permutation {
            if p >= n || seen[p] {
                return Err(Error::InvalidParameters(format!("{permutation:?} is not a permutation")));
            }
            seen[p] = true;
        }
        let mut used = vec![false; n];
        for v in tree.leaves() {
            if v >= n || used[v] {
                return Err(Error::InvalidParameters(format!("leaf variable {v} repeated or out of range")));
            }
            used[v] = true;
        }
        Ok(Self { tree, pre_rotations, permutation })
    }

    /// The coordinate projection `z ↦ z_var`.
    pub fn projection(n: usize, var: usize) -> Self {
        Self { tree: CompositionTree::Leaf { var }, pre_rotations: vec![ONE; n], permutation: (0..n).collect() }
    }

    pub fn dim(&self) -> usize {
        self.pre_rotations.len()
    }

    /// Input coordinates the function actually depends on, sorted.
    pub fn active_variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.tree.leaves().into_iter().map(|l| self.permutation[l]).collect();
        v.sort_unstable();
        v
    }

    pub fn eval_coords(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        let v: Vec<Complex64> =
            self.permutation.iter().zip(&self.pre_rotations).map(|(&p, &r)| r * z[p]).collect();
        Ok(self.tree.eval(&v))
    }

    pub fn eval(&self, z: &PolydiscPoint) -> Result<Complex64> {
        self.eval_coords(z.coords())
    }
}

pub fn rif_eval(f: &RationalInnerFunction, z: &PolydiscPoint) -> Result<Complex64> {
    f.eval(z)
}

/// Left inverse `F_{α,ω,t}` of `ψ_{ω,α}` with `F ∘ ψ_{ω,α} = λ m_{t·α}`.
///
/// `omega` has `n − 1` entries (the first coordinate is unrotated). Leaves of
/// zero weight are removed from the tree.
pub fn build_left_inverse(
    alpha: &[Complex64],
    omega: &[Complex64],
    t: &WeightVector,
    association: &Association,
) -> Result<RationalInnerFunction> {
    let n = alpha.len();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    if t.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.len() });
    }
    if omega.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, got: omega.len() });
    }
    let shape = association.shape(n);
    let mut leaves = Vec::new();
    collect_shape_leaves(&shape, &mut leaves);
    let mut sorted = leaves.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidParameters(format!("association leaves {leaves:?} do not cover 0..{n}")));
    }
    let built = build_subtree(&shape, alpha, t.values())?;
    let tree = match built {
        Some((tree, _, _)) => tree,
        None => return Err(Error::InvalidWeights("all weights vanish".into())),
    };
    let mut pre_rotations = vec![ONE];
    pre_rotations.extend(omega.iter().map(|w| unit(*w).conj()));
    Ok(RationalInnerFunction { tree, pre_rotations, permutation: (0..n).collect() })
}

fn collect_shape_leaves(s: &Shape, out: &mut Vec<usize>) {
    match s {
        Shape::Leaf(v) => out.push(*v),
        Shape::Node(l, r) => {
            collect_shape_leaves(l, out);
            collect_shape_leaves(r, out);
        }
    }
}

/// Returns the subtree with its total mass and mass-weighted point.
fn build_subtree(s: &Shape, alpha: &[Complex64], t: &[f64]) -> Result<Option<(CompositionTree, f64, Complex64)>> {
    match s {
        Shape::Leaf(v) => {
            if t[*v] > 0.0 {
                Ok(Some((CompositionTree::Leaf { var: *v }, t[*v], alpha[*v])))
            } else {
                Ok(None)
            }
        }
        Shape::Node(l, r) => {
            let left = build_subtree(l, alpha, t)?;
            let right = build_subtree(r, alpha, t)?;
            match (left, right) {
                (None, x) | (x, None) => Ok(x),
                (Some((lt, ml, bl)), Some((rt, mr, br))) => {
                    if (bl - br).norm() <= 1e-14 {
                        return Err(Error::DegenerateCombination { var: r.leftmost() });
                    }
                    let mass = ml + mr;
                    let params = MagicParams { s: ml / mass, eta: eta_for(bl, br)? };
                    let point = (bl * ml + br * mr) / mass;
                    Ok(Some((CompositionTree::Node { params, left: Box::new(lt), right: Box::new(rt) }, mass, point)))
                }
            }
        }
    }
}

/// `F(z) = (a·zᵢ + b·zⱼ + c·zᵢzⱼ)/(1 + d·zᵢ + e·zⱼ)` in input variables `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidiscCoefficients {
    pub vars: (usize, usize),
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
}

/// Coefficients of a function with at most one magic node.
pub fn bidisc_coefficients(f: &RationalInnerFunction) -> Result<BidiscCoefficients> {
    let zero = Complex64::new(0.0, 0.0);
    let input = |leaf: usize| (f.permutation[leaf], f.pre_rotations[leaf]);
    match &f.tree {
        CompositionTree::Leaf { var } => {
            let (i, r) = input(*var);
            let other = if i == 0 { 1 } else { 0 };
            let (vars, a, b) = if i < other { ((i, other), r, zero) } else { ((other, i), zero, r) };
            Ok(BidiscCoefficients { vars, a, b, c: zero, d: zero, e: zero })
        }
        CompositionTree::Node { params, left, right } => {
            let (CompositionTree::Leaf { var: l }, CompositionTree::Leaf { var: r }) = (left.as_ref(), right.as_ref())
            else {
                return Err(Error::InvalidParameters("more than one magic node".into()));
            };
            let ((i, ri), (j, rj)) = (input(*l), input(*r));
            let (s, e) = (params.s, params.eta.conj());
            // Φ(rᵢ zᵢ, rⱼ zⱼ) expanded.
            let (ca, cb, cc, cd, ce) =
                (ri * s, rj * (1.0 - s), e * ri * rj, e * ri * (1.0 - s), e * rj * s);
            if i < j {
                Ok(BidiscCoefficients { vars: (i, j), a: ca, b: cb, c: cc, d: cd, e: ce })
            } else {
                Ok(BidiscCoefficients { vars: (j, i), a: cb, b: ca, c: cc, d: ce, e: cd })
            }
        }
    }
}

impl BidiscCoefficients {
    pub fn eval(&self, zi: Complex64, zj: Complex64) -> Complex64 {
        (self.a * zi + self.b * zj + self.c * zi * zj) / (ONE + self.d * zi + self.e * zj)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        [self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d, self.e - other.e]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Three indices (ascending) and weights on them with the same `t · α`.
///
/// Weight is pushed along affine dependencies of the active points until
/// the remaining points are affinely independent; unused slots are padded
/// with zero weights.
pub fn caratheodory_reduce(alpha: &[Complex64], t: &WeightVector) -> Result<([usize; 3], [f64; 3])> {
    let n = alpha.len();
    if n < 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: n });
    }
    if t.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.len() });
    }
    let mut w = t.values().to_vec();
    loop {
        let active: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
        let Some(null) = affine_dependency(alpha, &active) else { break };
        // Move along the dependency until the first weight hits zero.
        let (mut step, mut hit) = (f64::INFINITY, active[0]);
        for (k, &i) in active.iter().enumerate() {
            if null[k] > 0.0 && w[i] / null[k] < step {
                step = w[i] / null[k];
                hit = i;
            }
        }
        for (k, &i) in active.iter().enumerate() {
            w[i] -= step * null[k];
            if w[i] < 0.0 {
                w[i] = 0.0;
            }
        }
        w[hit] = 0.0;
    }
    let sum: f64 = w.iter().sum();
    let mut indices: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
    for i in 0..n {
        if indices.len() == 3 {
            break;
        }
        if !indices.contains(&i) {
            indices.push(i);
        }
    }
    indices.sort_unstable();
    let idx = [indices[0], indices[1], indices[2]];
    Ok((idx, idx.map(|i| w[i] / sum)))
}

/// A vector `c` on `active` with `Σc = 0`, `Σc·α = 0`, normalized to have a
/// positive entry; `None` if the active points are affinely independent.
fn affine_dependency(alpha: &[Complex64], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    if k <= 1 {
        return None;
    }
    if k <= 4 {
        let m = DMatrix::from_fn(3, k, |r, c| match r {
            0 => alpha[active[c]].re,
            1 => alpha[active[c]].im,
            _ => 1.0,
        });
        let mut c: Vec<f64> = if k == 4 {
            // Signed 3×3 minors give the null vector of a rank-3 3×4 matrix.
            (0..4)
                .map(|j| {
                    let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
                    let minor = m.select_columns(&cols).determinant();
                    if j % 2 == 0 { minor } else { -minor }
                })
                .collect()
        } else {
            let independent = match k {
                2 => (alpha[active[0]] - alpha[active[1]]).norm() > 1e-12,
                _ => m.determinant().abs() > 1e-12,
            };
            if independent {
                return None;
            }
            vec![]
        };
        if c.iter().map(|v| v.abs()).fold(0.0, f64::max) <= 1e-14 {
            let eig = (m.transpose() * &m).symmetric_eigen();
            let r = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty").0;
            c = eig.eigenvectors.column(r).iter().copied().collect();
        }
        if c.iter().copied().fold(f64::NEG_INFINITY, f64::max) <= 0.0 {
            c.iter_mut().for_each(|v| *v = -*v);
        }
        return Some(c);
    }
    // More than four points: a dependency among the first four suffices.
    let sub = &active[..4];
    let c4 = affine_dependency(alpha, sub)?;
    let mut c = c4;
    c.resize(k, 0.0);
    Some(c)
}

//! Vector-space semantics of pregroup derivations.
//!
//! Basic types are interpreted as lists of spaces, products of types as
//! tensor products, and adjoints as dual spaces (each adjoint step reverses
//! the factor list and toggles every dual flag). A derivation compiles to a
//! set of index pairings; evaluating it is one multilinear contraction of
//! the word tensors.
//!
//! Every space carries a fixed orthonormal basis, so a dual space has the
//! same dimension as its primal. Dual flags are only used to validate that
//! each pairing is between a space and its dual.

mod model;
mod tensor;

pub use model::{english_interpretation, WordModel};
pub use tensor::{format_value, parse_tensor_text, Tensor};

use std::fmt;

use indexmap::IndexMap;
use nalgebra::DMatrix;
use thiserror::Error;

use crate::pregroup::{BasicType, SimpleType, Term, TypePoset};
use crate::reducer::{Derivation, Parse};
use tensor::Labeled;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error("no interpretation for basic type `{0}`")]
    Uninterpreted(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("space `{0}` must have dimension >= 1")]
    ZeroDimension(String),
    #[error("`{0}` <= `{1}` but their interpretations differ")]
    OrderNotIdentity(String, String),
    #[error("link {i}-{j}: factor {index} pairs {left} with {right}")]
    SpaceMismatch {
        i: usize,
        j: usize,
        index: usize,
        left: String,
        right: String,
    },
    #[error("no tensor for word `{word}` with type `{term}`")]
    MissingWord { word: String, term: String },
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(Shape, Shape),
    #[error("cosine of a zero vector")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid tensor: {0}")]
    BadTensor(String),
    #[error("invalid contraction order: {0}")]
    BadOrder(String),
    #[error("model file: {0}")]
    Model(String),
}

/// Space name to dimension; the field is always ℝ.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpaceTable(IndexMap<String, usize>);

impl SpaceTable {
    pub fn new() -> Self {
        SpaceTable::default()
    }

    pub fn with(mut self, name: &str, dim: usize) -> Result<Self, SemanticsError> {
        self.insert(name, dim)?;
        Ok(self)
    }

    pub fn insert(&mut self, name: &str, dim: usize) -> Result<(), SemanticsError> {
        if dim == 0 {
            return Err(SemanticsError::ZeroDimension(name.to_string()));
        }
        self.0.insert(name.to_string(), dim);
        Ok(())
    }

    pub fn dim(&self, name: &str) -> Result<usize, SemanticsError> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| SemanticsError::UnknownSpace(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// One tensor factor: a space or its dual.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub space: String,
    pub dual: bool,
}

impl Factor {
    pub fn primal(space: &str) -> Self {
        Factor {
            space: space.to_string(),
            dual: false,
        }
    }

    pub fn dual(space: &str) -> Self {
        Factor {
            space: space.to_string(),
            dual: true,
        }
    }

    /// Parses `N` or `N*`.
    pub fn parse(text: &str) -> Option<Self> {
        let (name, dual) = match text.strip_suffix('*') {
            Some(n) => (n, true),
            None => (text, false),
        };
        let valid = !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        valid.then(|| Factor {
            space: name.to_string(),
            dual,
        })
    }

    fn toggled(&self) -> Self {
        Factor {
            space: self.space.clone(),
            dual: !self.dual,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.space, if self.dual { "*" } else { "" })
    }
}

/// Ordered tensor factors of a type's interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Shape {
    pub factors: Vec<Factor>,
}

impl Shape {
    pub fn new(factors: Vec<Factor>) -> Self {
        Shape { factors }
    }

    pub fn dims(&self, spaces: &SpaceTable) -> Result<Vec<usize>, SemanticsError> {
        self.factors.iter().map(|f| spaces.dim(&f.space)).collect()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<String> = self.factors.iter().map(Factor::to_string).collect();
        f.write_str(&parts.join(" ⊗ "))
    }
}

/// Interpretation of basic types as factor lists.
///
/// Order-related basic types must share one factor list, so every order
/// step is the identity map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicInterpretation {
    map: IndexMap<BasicType, Vec<Factor>>,
}

impl BasicInterpretation {
    pub fn new(
        map: IndexMap<BasicType, Vec<Factor>>,
        poset: &TypePoset,
        spaces: &SpaceTable,
    ) -> Result<Self, SemanticsError> {
        for factors in map.values() {
            for f in factors {
                spaces.dim(&f.space)?;
            }
        }
        for (a, fa) in &map {
            for (b, fb) in &map {
                if a != b && poset.leq_basic(a, b).unwrap_or(false) && fa != fb {
                    return Err(SemanticsError::OrderNotIdentity(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(BasicInterpretation { map })
    }

    pub fn get(&self, base: &BasicType) -> Option<&[Factor]> {
        self.map.get(base).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasicType, &[Factor])> {
        self.map.iter().map(|(k, v)| (k, v.as_slice()))
    }
}

/// Factor list of a simple type: one reversal and toggle per adjoint step.
pub fn interpret_simple(t: &SimpleType, interp: &BasicInterpretation) -> Result<Vec<Factor>, SemanticsError> {
    let base = interp
        .get(&t.base)
        .ok_or_else(|| SemanticsError::Uninterpreted(t.base.to_string()))?;
    let mut factors = base.to_vec();
    for _ in 0..t.z.unsigned_abs() {
        factors = factors.iter().rev().map(Factor::toggled).collect();
    }
    Ok(factors)
}

pub fn interpret_term(term: &Term, interp: &BasicInterpretation) -> Result<Shape, SemanticsError> {
    let mut factors = Vec::new();
    for t in term.factors() {
        factors.extend(interpret_simple(t, interp)?);
    }
    Ok(Shape::new(factors))
}

/// Index pairings realizing a derivation's links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionPlan {
    /// Global index positions (into the concatenated factor list).
    pub pairs: Vec<(usize, usize)>,
    /// Global index positions of the survivor, in order.
    pub output: Vec<usize>,
    pub output_shape: Shape,
    /// Total number of indices in the concatenated factor list.
    pub rank: usize,
}

pub fn contraction_plan(d: &Derivation, interp: &BasicInterpretation) -> Result<ContractionPlan, SemanticsError> {
    let per_pos: Vec<Vec<Factor>> = d
        .term
        .factors()
        .iter()
        .map(|t| interpret_simple(t, interp))
        .collect::<Result<_, _>>()?;
    let mut offsets = Vec::with_capacity(per_pos.len());
    let mut rank = 0;
    for f in &per_pos {
        offsets.push(rank);
        rank += f.len();
    }
    let mut pairs = Vec::new();
    for &(i, j) in &d.links {
        let (left, right) = (&per_pos[i - 1], &per_pos[j - 1]);
        if left.len() != right.len() {
            return Err(SemanticsError::SpaceMismatch {
                i,
                j,
                index: left.len().min(right.len()),
                left: format!("{} factors", left.len()),
                right: format!("{} factors", right.len()),
            });
        }
        let n = left.len();
        for k in 0..n {
            let (a, b) = (&left[k], &right[n - 1 - k]);
            if a.space != b.space || a.dual == b.dual {
                return Err(SemanticsError::SpaceMismatch {
                    i,
                    j,
                    index: k,
                    left: a.to_string(),
                    right: b.to_string(),
                });
            }
            pairs.push((offsets[i - 1] + k, offsets[j - 1] + n - 1 - k));
        }
    }
    let s = d.survivor - 1;
    let output = (offsets[s]..offsets[s] + per_pos[s].len()).collect();
    Ok(ContractionPlan {
        pairs,
        output,
        output_shape: Shape::new(per_pos[s].clone()),
        rank,
    })
}

/// Contracts `tensors` (in sentence order, their indices concatenated)
/// according to `plan`, processing pairs in the order given by `order`
/// (indices into `plan.pairs`).
pub fn contract_in_order(
    tensors: &[&Tensor],
    plan: &ContractionPlan,
    order: &[usize],
) -> Result<Tensor, SemanticsError> {
    let rank: usize = tensors.iter().map(|t| t.dims().len()).sum();
    if rank != plan.rank {
        return Err(SemanticsError::BadOrder(format!(
            "tensors have {rank} indices, plan expects {}",
            plan.rank
        )));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..plan.pairs.len()).collect::<Vec<_>>() {
        return Err(SemanticsError::BadOrder("not a permutation of the plan's pairs".into()));
    }

    // paired indices share the pair number as label; outputs follow
    let npairs = plan.pairs.len();
    let mut label = vec![usize::MAX; rank];
    for (p, &(a, b)) in plan.pairs.iter().enumerate() {
        label[a] = p;
        label[b] = p;
    }
    for (k, &g) in plan.output.iter().enumerate() {
        label[g] = npairs + k;
    }
    let mut slots: Vec<Option<Labeled>> = Vec::with_capacity(tensors.len());
    let mut start = 0;
    for t in tensors {
        let n = t.dims().len();
        slots.push(Some(Labeled {
            labels: label[start..start + n].to_vec(),
            dims: t.dims().to_vec(),
            data: t.values().to_vec(),
        }));
        start += n;
    }
    if let Some(g) = label.iter().position(|&l| l == usize::MAX) {
        return Err(SemanticsError::BadOrder(format!("index {g} is neither paired nor output")));
    }

    for &p in order {
        let holders: Vec<usize> = slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.as_ref().is_some_and(|t| t.labels.contains(&p)))
            .map(|(k, _)| k)
            .collect();
        match holders.as_slice() {
            [k] => {
                let t = slots[*k].take().expect("holder");
                let axes: Vec<usize> = (0..t.labels.len()).filter(|&a| t.labels[a] == p).collect();
                slots[*k] = Some(t.trace(axes[0], axes[1]));
            }
            [k1, k2] => {
                let b = slots[*k2].take().expect("holder");
                let a = slots[*k1].take().expect("holder");
                let (ax, bx) = (a.axis_of(p).expect("label"), b.axis_of(p).expect("label"));
                slots[*k1] = Some(a.contract(ax, &b, bx));
            }
            _ => unreachable!("each label is carried by two axes"),
        }
    }

    let merged = slots
        .into_iter()
        .flatten()
        .fold(Labeled::scalar(1.0), |acc, t| acc.outer(&t));
    let order: Vec<usize> = (0..plan.output.len())
        .map(|k| merged.axis_of(npairs + k).expect("output label"))
        .collect();
    let result = merged.permute(&order);
    Tensor::new(plan.output_shape.clone(), result.dims, result.data)
}

fn word_tensors<'m>(parse: &Parse, model: &'m WordModel) -> Result<Vec<&'m Tensor>, SemanticsError> {
    parse
        .words
        .iter()
        .zip(&parse.choice)
        .map(|(w, t)| {
            model.get(w, t).ok_or_else(|| SemanticsError::MissingWord {
                word: w.clone(),
                term: t.to_string(),
            })
        })
        .collect()
}

/// Meaning of a parse: contraction of its word tensors along the plan.
pub fn evaluate(parse: &Parse, model: &WordModel) -> Result<Tensor, SemanticsError> {
    let plan = contraction_plan(&parse.derivation, model.interpretation())?;
    let tensors = word_tensors(parse, model)?;
    let order: Vec<usize> = (0..plan.pairs.len()).collect();
    contract_in_order(&tensors, &plan, &order)
}

/// Same as [`evaluate`] with an explicit pair order.
pub fn evaluate_in_order(parse: &Parse, model: &WordModel, order: &[usize]) -> Result<Tensor, SemanticsError> {
    let plan = contraction_plan(&parse.derivation, model.interpretation())?;
    let tensors = word_tensors(parse, model)?;
    contract_in_order(&tensors, &plan, order)
}

/// Auxiliary placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxVariant {
    /// `pi3^r s1 j^l`, shape `N* ⊗ S ⊗ S* ⊗ N`.
    Declarative,
    /// `q1 i^l pi^l`, shape `S ⊗ S* ⊗ N ⊗ N*`.
    YesNo,
}

/// Tensor of an auxiliary acting as `μ ∘ ev` on a subject and a verb.
pub fn lift_auxiliary(mu: &DMatrix<f64>, variant: AuxVariant, n_dim: usize) -> Result<Tensor, SemanticsError> {
    if mu.nrows() != mu.ncols() {
        return Err(SemanticsError::Dimension {
            expected: mu.nrows(),
            got: mu.ncols(),
        });
    }
    let s_dim = mu.nrows();
    let (factors, dims) = match variant {
        AuxVariant::Declarative => (
            vec![Factor::dual("N"), Factor::primal("S"), Factor::dual("S"), Factor::primal("N")],
            vec![n_dim, s_dim, s_dim, n_dim],
        ),
        AuxVariant::YesNo => (
            vec![Factor::primal("S"), Factor::dual("S"), Factor::primal("N"), Factor::dual("N")],
            vec![s_dim, s_dim, n_dim, n_dim],
        ),
    };
    let mut data = Vec::with_capacity(dims.iter().product());
    match variant {
        AuxVariant::Declarative => {
            for n in 0..n_dim {
                for s in 0..s_dim {
                    for s2 in 0..s_dim {
                        for n2 in 0..n_dim {
                            data.push(if n == n2 { mu[(s, s2)] } else { 0.0 });
                        }
                    }
                }
            }
        }
        AuxVariant::YesNo => {
            for s in 0..s_dim {
                for s2 in 0..s_dim {
                    for n in 0..n_dim {
                        for n2 in 0..n_dim {
                            data.push(if n == n2 { mu[(s, s2)] } else { 0.0 });
                        }
                    }
                }
            }
        }
    }
    Tensor::new(Shape::new(factors), dims, data)
}

/// Tensor of a subject wh-word: `T[t,u,m] = δ(t,u)·v[m]` over `S ⊗ S* ⊗ N`.
pub fn lift_wh_subject(v: &[f64], n_dim: usize, s_dim: usize) -> Result<Tensor, SemanticsError> {
    if v.len() != n_dim {
        return Err(SemanticsError::Dimension {
            expected: n_dim,
            got: v.len(),
        });
    }
    let mut data = Vec::with_capacity(s_dim * s_dim * n_dim);
    for t in 0..s_dim {
        for u in 0..s_dim {
            for &vm in v {
                data.push(if t == u { vm } else { 0.0 });
            }
        }
    }
    Tensor::new(
        Shape::new(vec![Factor::primal("S"), Factor::dual("S"), Factor::primal("N")]),
        vec![s_dim, s_dim, n_dim],
        data,
    )
}

/// Cosine over flattened values.
pub fn cosine(u: &Tensor, v: &Tensor) -> Result<f64, SemanticsError> {
    if u.dims() != v.dims() {
        return Err(SemanticsError::ShapeMismatch(u.shape().clone(), v.shape().clone()));
    }
    cosine_slices(u.values(), v.values())
}

pub fn cosine_slices(u: &[f64], v: &[f64]) -> Result<f64, SemanticsError> {
    if u.len() != v.len() {
        return Err(SemanticsError::Dimension {
            expected: u.len(),
            got: v.len(),
        });
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(SemanticsError::ZeroVector);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Dimensions of the two bracketings of `x·y·z^l` with `dim x = m`,
/// `dim y = n`, `dim z = p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimAudit {
    pub m: u64,
    pub n: u64,
    pub p: u64,
    /// `(x·y)·z^l` and `x·(y·z^l)` under tensor semantics: both `m·n·p`.
    pub tensor_left: u64,
    pub tensor_right: u64,
    /// Hybrid direct-sum semantics: `p(m+n)`.
    pub sum_left: u64,
    /// Hybrid direct-sum semantics: `m + pn`.
    pub sum_right: u64,
}

impl DimAudit {
    pub fn tensor_equal(&self) -> bool {
        self.tensor_left == self.tensor_right
    }

    pub fn sum_equal(&self) -> bool {
        self.sum_left == self.sum_right
    }
}

impl fmt::Display for DimAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |eq: bool| if eq { "equal" } else { "unequal" };
        writeln!(f, "x·y·z^l with dim x = {}, dim y = {}, dim z = {}", self.m, self.n, self.p)?;
        writeln!(
            f,
            "tensor:     (x·y)·z^l = {}  x·(y·z^l) = {}  {}",
            self.tensor_left,
            self.tensor_right,
            verdict(self.tensor_equal())
        )?;
        writeln!(
            f,
            "direct-sum: (x·y)·z^l = {}  x·(y·z^l) = {}  {}",
            self.sum_left,
            self.sum_right,
            verdict(self.sum_equal())
        )
    }
}

/// Returns `None` unless `m, n, p ≥ 1`.
pub fn dim_audit(m: u64, n: u64, p: u64) -> Option<DimAudit> {
    if m == 0 || n == 0 || p == 0 {
        return None;
    }
    Some(DimAudit {
        m,
        n,
        p,
        // (x ⊗ y) ⊗ z* and x ⊗ (z* ⊗ y)
        tensor_left: (m * n) * p,
        tensor_right: m * (p * n),
        // Hom(z, x + y) and x + Hom(z, y)
        sum_left: p * (m + n),
        sum_right: m + p * n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::builtin_english;

    fn st(name: &str, z: i32) -> SimpleType {
        SimpleType::of(name, z)
    }

    fn english() -> (BasicInterpretation, SpaceTable) {
        let g = builtin_english();
        let spaces = SpaceTable::new().with("N", 3).unwrap().with("S", 2).unwrap();
        (english_interpretation(&g.poset, &spaces).unwrap(), spaces)
    }

    #[test]
    fn interpret_simple_examples() {
        let (interp, _) = english();
        assert_eq!(interpret_simple(&st("n", 0), &interp).unwrap(), vec![Factor::primal("N")]);
        assert_eq!(interpret_simple(&st("n", -1), &interp).unwrap(), vec![Factor::dual("N")]);
        assert_eq!(
            interpret_simple(&st("j", -1), &interp).unwrap(),
            vec![Factor::dual("S"), Factor::primal("N")]
        );
        for z in -3..=3 {
            assert_eq!(
                interpret_simple(&st("j", z + 2), &interp).unwrap(),
                interpret_simple(&st("j", z), &interp).unwrap()
            );
        }
    }

    #[test]
    fn interpret_term_dims() {
        let (interp, spaces) = english();
        let dims = |s: &str| {
            interpret_term(&crate::grammar::parse_term(s).unwrap(), &interp)
                .unwrap()
                .dims(&spaces)
                .unwrap()
        };
        assert_eq!(dims("n"), vec![3]);
        assert_eq!(dims("s"), vec![2]);
        assert_eq!(dims("pi3^r s1 j^l"), vec![3, 2, 2, 3]);
    }

    #[test]
    fn interpretation_must_make_order_steps_identities() {
        let poset = TypePoset::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        let spaces = SpaceTable::new().with("N", 2).unwrap().with("S", 2).unwrap();
        let mut map = IndexMap::new();
        map.insert(BasicType::new("a").unwrap(), vec![Factor::primal("N")]);
        map.insert(BasicType::new("b").unwrap(), vec![Factor::primal("S")]);
        assert!(matches!(
            BasicInterpretation::new(map, &poset, &spaces),
            Err(SemanticsError::OrderNotIdentity(..))
        ));
        let mut map = IndexMap::new();
        map.insert(BasicType::new("a").unwrap(), vec![Factor::primal("X")]);
        assert_eq!(
            BasicInterpretation::new(map, &poset, &spaces),
            Err(SemanticsError::UnknownSpace("X".into()))
        );
        assert!(SpaceTable::new().with("N", 0).is_err());
    }

    #[test]
    fn plan_for_she_sleeps() {
        let (interp, _) = english();
        let d = Derivation {
            term: crate::grammar::parse_term("pi3 pi3^r s1").unwrap(),
            links: vec![(1, 2)],
            survivor: 3,
            target: st("s1", 0),
        };
        let plan = contraction_plan(&d, &interp).unwrap();
        assert_eq!(plan.pairs, vec![(0, 1)]);
        assert_eq!(plan.output, vec![2]);
        assert_eq!(plan.output_shape, Shape::new(vec![Factor::primal("S")]));
    }

    #[test]
    fn plan_pairs_multi_factor_links_reversed() {
        let (interp, _) = english();
        // j^l · i : [S*, N] against reversed [N*, S]
        let d = Derivation {
            term: crate::grammar::parse_term("s j^l i").unwrap(),
            links: vec![(2, 3)],
            survivor: 1,
            target: st("s", 0),
        };
        let plan = contraction_plan(&d, &interp).unwrap();
        assert_eq!(plan.pairs, vec![(1, 4), (2, 3)]);
    }

    #[test]
    fn plan_rejects_inconsistent_interpretation() {
        let poset = TypePoset::from_names(&["a", "b"], &[]).unwrap();
        let spaces = SpaceTable::new().with("N", 2).unwrap().with("S", 2).unwrap();
        let mut map = IndexMap::new();
        map.insert(BasicType::new("a").unwrap(), vec![Factor::primal("N")]);
        map.insert(BasicType::new("b").unwrap(), vec![Factor::primal("S")]);
        let interp = BasicInterpretation::new(map, &poset, &spaces).unwrap();
        let d = Derivation {
            term: crate::grammar::parse_term("a b^r a").unwrap(),
            links: vec![(1, 2)],
            survivor: 3,
            target: st("a", 0),
        };
        assert!(matches!(
            contraction_plan(&d, &interp),
            Err(SemanticsError::SpaceMismatch { i: 1, j: 2, index: 0, .. })
        ));
    }

    #[test]
    fn cosine_examples() {
        let fashion = [0.0, 0.0, 1.0];
        let red = cosine_slices(&[0.0, 16.0, 73.0], &fashion).unwrap();
        let plain = cosine_slices(&[0.0, 91.0, 6.0], &fashion).unwrap();
        assert!((red - 73.0 / 5585f64.sqrt()).abs() < 1e-12);
        assert!((red - 0.9768).abs() < 5e-5);
        assert!((plain - 0.0658).abs() < 5e-5);
        assert!(red > plain);
        assert_eq!(cosine_slices(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!((cosine_slices(&[3.0, -4.0], &[3.0, -4.0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine_slices(&[0.0, 0.0], &[1.0, 0.0]), Err(SemanticsError::ZeroVector));
    }

    #[test]
    fn dim_audit_examples() {
        let a = dim_audit(2, 3, 4).unwrap();
        assert_eq!((a.tensor_left, a.tensor_right), (24, 24));
        assert_eq!((a.sum_left, a.sum_right), (20, 14));
        assert!(!a.sum_equal());
        let b = dim_audit(5, 7, 1).unwrap();
        assert_eq!(b.sum_left, 12);
        assert!(b.sum_equal());
        let c = dim_audit(1, 1, 2).unwrap();
        assert_eq!((c.sum_left, c.sum_right), (4, 3));
        assert!(dim_audit(0, 1, 1).is_none());
    }

    #[test]
    fn wh_subject_rejects_wrong_dimension() {
        assert_eq!(
            lift_wh_subject(&[1.0, 2.0], 3, 2),
            Err(SemanticsError::Dimension { expected: 3, got: 2 })
        );
    }

    #[test]
    fn auxiliary_rejects_non_square() {
        let mu = DMatrix::from_row_slice(2, 3, &[1., 0., 0., 0., 1., 0.]);
        assert!(lift_auxiliary(&mu, AuxVariant::Declarative, 3).is_err());
    }
}

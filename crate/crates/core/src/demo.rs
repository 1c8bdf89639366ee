//! The lumberjack pipeline: fixture tables, clustered vectors, learned
//! adjective and verb maps, and word models with a two-dimensional truth
//! space (first axis true, second false).

use std::fmt;
use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::distributional::{cluster_columns, learn_linear_map, residual, ClusterMap, CooccurrenceTable, DistError};
use crate::grammar::{parse_type_expr, GrammarSpec};
use crate::reducer::{parse_sentence, Limits, ReduceError};
use crate::semantics::{
    contract_in_order, contraction_plan, cosine_slices, dim_audit, english_interpretation, evaluate, lift_auxiliary,
    lift_wh_subject, AuxVariant, SemanticsError, SpaceTable, Tensor, WordModel,
};

pub const RAW_COUNTS: &str = include_str!("../data/demo/raw_counts.tsv");
pub const REFERENCE_CLUSTERS: &str = include_str!("../data/demo/reference_clusters.tsv");
pub const CLUSTERS: &str = include_str!("../data/demo/clusters.txt");
pub const CORPUS: &str = include_str!("../data/demo/corpus.txt");

/// Meaning of "lumberjacks drink" in the graded reading.
pub const GRADED_TRUTH: [f64; 2] = [0.8, 0.2];
/// The same sentence after the auxiliary's endomorphism.
pub const MAY_TRUTH: [f64; 2] = [0.75, 0.35];

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}: {1}")]
    Table(String, DistError),
    #[error("fixture `{0}` lacks row `{1}`")]
    MissingRow(String, String),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("`{0}` has no parse")]
    NoParse(String),
    #[error("singular constraint system")]
    Singular,
}

/// Input tables for the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixtures {
    pub raw: CooccurrenceTable,
    /// Clustered rows as originally printed, and the adjective-phrase targets.
    pub reference: CooccurrenceTable,
    pub clusters: ClusterMap,
    pub corpus: String,
}

impl Fixtures {
    pub fn builtin() -> Self {
        Self::from_texts(RAW_COUNTS, REFERENCE_CLUSTERS, CLUSTERS, CORPUS).expect("bundled fixtures are valid")
    }

    pub fn from_texts(raw: &str, reference: &str, clusters: &str, corpus: &str) -> Result<Self, DemoError> {
        Ok(Fixtures {
            raw: CooccurrenceTable::from_tsv(raw).map_err(|e| DemoError::Table("raw_counts.tsv".into(), e))?,
            reference: CooccurrenceTable::from_tsv(reference)
                .map_err(|e| DemoError::Table("reference_clusters.tsv".into(), e))?,
            clusters: ClusterMap::from_text(clusters).map_err(|e| DemoError::Table("clusters.txt".into(), e))?,
            corpus: corpus.to_string(),
        })
    }

    /// Reads `raw_counts.tsv`, `reference_clusters.tsv`, `clusters.txt` and
    /// `corpus.txt` from `dir`.
    pub fn load(dir: &Path) -> Result<Self, DemoError> {
        let read = |name: &str| {
            let p = dir.join(name);
            fs::read_to_string(&p).map_err(|e| DemoError::Io(p.display().to_string(), e))
        };
        Self::from_texts(
            &read("raw_counts.tsv")?,
            &read("reference_clusters.tsv")?,
            &read("clusters.txt")?,
            &read("corpus.txt")?,
        )
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("raw_counts.tsv"), self.raw.to_tsv())?;
        fs::write(dir.join("reference_clusters.tsv"), self.reference.to_tsv())?;
        fs::write(dir.join("clusters.txt"), self.clusters.to_text())?;
        fs::write(dir.join("corpus.txt"), &self.corpus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    /// Tall lumberjacks drink: true; red lumberjacks drink: false.
    Strict,
    /// Lumberjacks drink: 0.8 true, 0.2 false.
    Graded,
}

/// Everything the pipeline learns from its fixtures.
#[derive(Debug, Clone, PartialEq)]
pub struct Demo {
    pub clustered: CooccurrenceTable,
    pub lumberjack: Vec<f64>,
    pub lombard: Vec<f64>,
    pub red_target: Vec<f64>,
    pub tall_target: Vec<f64>,
    pub red: DMatrix<f64>,
    pub tall: DMatrix<f64>,
    pub drink_strict: DMatrix<f64>,
    pub drink_graded: DMatrix<f64>,
    pub mu: DMatrix<f64>,
}

fn row(table: &CooccurrenceTable, name: &str, target: &str) -> Result<Vec<f64>, DemoError> {
    table
        .row(target)
        .ok_or_else(|| DemoError::MissingRow(name.to_string(), target.to_string()))
}

/// Verb map `N → S` with a zero first (bank) column, sending `tall` to
/// true and `red` to false; solved as a 2×2 system on the other columns.
pub fn strict_drink(tall: &[f64], red: &[f64]) -> Result<DMatrix<f64>, DemoError> {
    let (a, b, c, d) = (tall[1], red[1], tall[2], red[2]);
    let det = a * d - b * c;
    if det == 0.0 {
        return Err(DemoError::Singular);
    }
    // [[a, b], [c, d]]⁻¹ maps the two inputs to the standard basis
    let inv = [[d / det, -b / det], [-c / det, a / det]];
    Ok(DMatrix::from_row_slice(
        2,
        3,
        &[0.0, inv[0][0], inv[0][1], 0.0, inv[1][0], inv[1][1]],
    ))
}

/// Diagonal endomorphism sending `before` to `after` componentwise.
pub fn diagonal_between(before: &[f64], after: &[f64]) -> Result<DMatrix<f64>, DemoError> {
    if before.contains(&0.0) {
        return Err(DemoError::Singular);
    }
    let diag: Vec<f64> = before.iter().zip(after).map(|(b, a)| a / b).collect();
    Ok(DMatrix::from_diagonal(&DVector::from_vec(diag)))
}

impl Demo {
    pub fn build(f: &Fixtures) -> Result<Self, DemoError> {
        let clustered = cluster_columns(&f.raw, &f.clusters)?;
        let lumberjack = row(&clustered, "raw_counts.tsv", "lumberjack")?;
        let lombard = row(&clustered, "raw_counts.tsv", "lombard")?;
        let red_target = row(&f.reference, "reference_clusters.tsv", "red lumberjack")?;
        let tall_target = row(&f.reference, "reference_clusters.tsv", "tall lumberjack")?;
        let red = learn_linear_map(&[(lumberjack.clone(), red_target.clone())])?;
        let tall = learn_linear_map(&[(lumberjack.clone(), tall_target.clone())])?;
        let drink_strict = strict_drink(&tall_target, &red_target)?;
        let drink_graded = learn_linear_map(&[(lumberjack.clone(), GRADED_TRUTH.to_vec())])?;
        let mu = diagonal_between(&GRADED_TRUTH, &MAY_TRUTH)?;
        Ok(Demo {
            clustered,
            lumberjack,
            lombard,
            red_target,
            tall_target,
            red,
            tall,
            drink_strict,
            drink_graded,
            mu,
        })
    }

    /// Word model for the demo vocabulary under `reading`.
    pub fn model(&self, reading: Reading, grammar: &GrammarSpec) -> Result<WordModel, DemoError> {
        let spaces = SpaceTable::new().with("N", 3)?.with("S", 2)?;
        let interp = english_interpretation(&grammar.poset, &spaces)?;
        let mut m = WordModel::new(spaces, interp);
        let ty = |s: &str| parse_type_expr(s, &grammar.poset).expect("demo types are declared");

        for w in ["lumberjacks", "lumberjack"] {
            m.insert(w, ty("n"), vec![3], self.lumberjack.clone())?;
        }
        m.insert("lombard", ty("n"), vec![3], self.lombard.clone())?;
        for (k, w) in ["bank", "wood", "fashion"].iter().enumerate() {
            let mut axis = vec![0.0; 3];
            axis[k] = 1.0;
            m.insert(w, ty("n"), vec![3], axis)?;
        }
        // n n^l: T[out, in] = M[out][in]
        for (w, map) in [("red", &self.red), ("tall", &self.tall)] {
            m.insert(w, ty("n n^l"), vec![3, 3], row_major(map))?;
        }
        // n^r s and i: T[n, s] = D[s][n]
        let drink = match reading {
            Reading::Strict => &self.drink_strict,
            Reading::Graded => &self.drink_graded,
        };
        let drink_t = row_major(&drink.transpose());
        m.insert("drink", ty("n^r s"), vec![3, 2], drink_t.clone())?;
        m.insert("drink", ty("i"), vec![3, 2], drink_t)?;

        let decl = lift_auxiliary(&self.mu, AuxVariant::Declarative, 3)?;
        let yesno = lift_auxiliary(&self.mu, AuxVariant::YesNo, 3)?;
        m.insert_tensor("may", ty("pi3^r s1 j^l"), decl)?;
        m.insert_tensor("may", ty("q1 i^l pi^l"), yesno.clone())?;
        m.insert_tensor("may", ty("q1 j^l pi^l"), yesno)?;
        m.insert_tensor("who", ty("qbar s1^l pi3"), lift_wh_subject(&self.lumberjack, 3, 2)?)?;
        Ok(m)
    }
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

/// Meaning of the first parse of `sentence`.
pub fn first_meaning(sentence: &str, grammar: &GrammarSpec, model: &WordModel) -> Result<Tensor, DemoError> {
    let parses = parse_sentence(sentence, grammar, None, &Limits::default())?;
    let p = parses.first().ok_or_else(|| DemoError::NoParse(sentence.to_string()))?;
    Ok(evaluate(p, model)?)
}

/// Outcome of one self-check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.6}", x)).collect();
    format!("({})", parts.join(", "))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Runs the pipeline's self-checks against `demo` and the bundled grammar.
pub fn run_checks(demo: &Demo, grammar: &GrammarSpec) -> Result<Vec<Check>, DemoError> {
    let strict = demo.model(Reading::Strict, grammar)?;
    let graded = demo.model(Reading::Graded, grammar)?;
    let mean = |s: &str, m: &WordModel| first_meaning(s, grammar, m).map(|t| t.values().to_vec());
    let mut checks = Vec::new();

    let mut audit_ok = true;
    for m in 1..=6 {
        for n in 1..=6 {
            for p in 1..=6 {
                let a = dim_audit(m, n, p).expect("positive dims");
                audit_ok &= a.tensor_equal() && a.sum_equal() == (p == 1);
            }
        }
    }
    checks.push(Check {
        name: "ambiguity audit",
        passed: audit_ok,
        detail: "tensor bracketings agree on [1..6]^3; direct sums agree iff p = 1".into(),
    });

    let mut worst: f64 = 0.0;
    let sentences = [
        "tall lumberjacks drink .",
        "lumberjacks may drink .",
        "may lumberjacks drink ?",
        "who may drink ?",
    ];
    for s in sentences {
        let parses = parse_sentence(s, grammar, None, &Limits::default())?;
        let p = parses.first().ok_or_else(|| DemoError::NoParse(s.to_string()))?;
        let plan = contraction_plan(&p.derivation, graded.interpretation())?;
        let tensors: Vec<&Tensor> = p
            .words
            .iter()
            .zip(&p.choice)
            .map(|(w, t)| graded.get(w, t).expect("demo vocabulary"))
            .collect();
        let orders = permutations(plan.pairs.len());
        let base = contract_in_order(&tensors, &plan, &orders[0])?;
        for o in &orders[1..] {
            let r = contract_in_order(&tensors, &plan, o)?;
            for (x, y) in base.values().iter().zip(r.values()) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    checks.push(Check {
        name: "bracketing invariance",
        passed: worst <= 1e-9,
        detail: format!("largest difference across contraction orders {worst:.1e}"),
    });

    let tall_s = mean("tall lumberjacks drink .", &strict)?;
    let red_s = mean("red lumberjacks drink .", &strict)?;
    let may_d = mean("lumberjacks may drink .", &graded)?;
    checks.push(Check {
        name: "truth pipeline",
        passed: close(&tall_s, &[1.0, 0.0], 1e-12)
            && close(&red_s, &[0.0, 1.0], 1e-12)
            && close(&may_d, &MAY_TRUTH, 1e-12),
        detail: format!(
            "tall {} red {} may {}",
            fmt_vec(&tall_s),
            fmt_vec(&red_s),
            fmt_vec(&may_d)
        ),
    });

    let yesno = mean("may lumberjacks drink ?", &graded)?;
    let who = mean("who may drink ?", &graded)?;
    checks.push(Check {
        name: "question equivalence",
        passed: close(&yesno, &may_d, 1e-12) && close(&who, &may_d, 1e-12),
        detail: format!("yes-no {} who {}", fmt_vec(&yesno), fmt_vec(&who)),
    });

    let fashion = [0.0, 0.0, 1.0];
    let c_plain = cosine_slices(&demo.lumberjack, &fashion)?;
    let c_red = cosine_slices(&demo.red_target, &fashion)?;
    let c_tall = cosine_slices(&demo.tall_target, &fashion)?;
    let pair_red = [(demo.lumberjack.clone(), demo.red_target.clone())];
    let single_res = residual(&demo.red, &pair_red).sqrt();
    let multi = [
        (demo.lumberjack.clone(), demo.tall_target.clone()),
        (demo.lombard.clone(), demo.lombard.clone()),
        (vec![0.0, 1.0, 0.0], vec![0.0, 1.0, 0.0]),
        (vec![1.0, 1.0, 1.0], vec![2.0, 0.0, 1.0]),
    ];
    let learned = learn_linear_map(&multi)?;
    let multi_gap = normal_equation_solve(&multi)
        .map(|oracle| (learned - oracle).amax())
        .unwrap_or(f64::INFINITY);
    checks.push(Check {
        name: "distributional goldens",
        passed: close(&demo.lumberjack, &[0.0, 91.0, 6.0], 0.0)
            && c_red > c_plain
            && c_tall < c_plain
            && single_res < 1e-9
            && multi_gap < 1e-6,
        detail: format!(
            "lumberjack {}; cos to fashion: red {c_red:.4} plain {c_plain:.4} tall {c_tall:.4}; \
             single-pair residual {single_res:.1e}; multi-pair gap {multi_gap:.1e}",
            fmt_vec(&demo.lumberjack)
        ),
    });
    Ok(checks)
}

/// Full-rank normal equations solved by LU, for cross-checking
/// [`learn_linear_map`].
pub fn normal_equation_solve(pairs: &[(Vec<f64>, Vec<f64>)]) -> Option<DMatrix<f64>> {
    let (din, dout) = (pairs.first()?.0.len(), pairs.first()?.1.len());
    let x = DMatrix::from_fn(din, pairs.len(), |r, c| pairs[c].0[r]);
    let y = DMatrix::from_fn(dout, pairs.len(), |r, c| pairs[c].1[r]);
    let gram = &x * x.transpose();
    // M·G = Y·Xᵀ, so Gᵀ·Mᵀ = X·Yᵀ
    let rhs = &x * y.transpose();
    let mt = gram.transpose().lu().solve(&rhs)?;
    Some(mt.transpose())
}

/// Rows of the recomputed clustered table that differ from the reference.
pub fn cluster_mismatches(demo: &Demo, f: &Fixtures) -> Vec<(String, Vec<f64>, Vec<f64>)> {
    demo.clustered
        .targets()
        .iter()
        .filter_map(|t| {
            let got = demo.clustered.row(t)?;
            let printed = f.reference.row(t)?;
            (got != printed).then(|| (t.clone(), got, printed))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::builtin_english;

    #[test]
    fn strict_drink_matches_hand_solution() {
        let d = strict_drink(&[0.0, 98.0, 2.0], &[0.0, 16.0, 73.0]).unwrap();
        let expect = [0.0, 73.0, -16.0, 0.0, -2.0, 98.0];
        for (k, e) in expect.iter().enumerate() {
            assert!((d[(k / 3, k % 3)] - e / 7122.0).abs() < 1e-15);
        }
        assert!(strict_drink(&[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0]).is_err());
    }

    #[test]
    fn mu_is_diagonal() {
        let mu = diagonal_between(&GRADED_TRUTH, &MAY_TRUTH).unwrap();
        assert!((mu[(0, 0)] - 0.9375).abs() < 1e-15);
        assert!((mu[(1, 1)] - 1.75).abs() < 1e-15);
        assert_eq!(mu[(0, 1)], 0.0);
    }

    #[test]
    fn builtin_fixtures_build() {
        let f = Fixtures::builtin();
        let demo = Demo::build(&f).unwrap();
        assert_eq!(demo.lumberjack, vec![0.0, 91.0, 6.0]);
        assert_eq!(demo.lombard, vec![42.0, 0.0, 0.0]);
        let mism = cluster_mismatches(&demo, &f);
        assert_eq!(mism.len(), 1);
        assert_eq!(mism[0].0, "lombard");
    }

    #[test]
    fn all_checks_pass() {
        let g = builtin_english();
        let demo = Demo::build(&Fixtures::builtin()).unwrap();
        for c in run_checks(&demo, &g).unwrap() {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}

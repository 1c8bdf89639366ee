//! Co-occurrence counting, PPMI weighting, column clustering and
//! least-squares learning of linear maps between word vectors.

use std::fmt::Write as _;

use indexmap::{IndexMap, IndexSet};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("window radius must be at least 1")]
    ZeroWindow,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("counts must be finite and non-negative (row `{target}`, column `{context}`)")]
    BadCount { target: String, context: String },
    #[error("expected a {rows}x{cols} matrix")]
    BadSize { rows: usize, cols: usize },
    #[error("table has no counts")]
    AllZero,
    #[error("context `{0}` is not assigned to a cluster")]
    Unmapped(String),
    #[error("cluster `{0}` is not declared")]
    UnknownCluster(String),
    #[error("no training pairs")]
    NoPairs,
    #[error("pair {index}: expected dimensions {expected_in}->{expected_out}, got {got_in}->{got_out}")]
    Dimension {
        index: usize,
        expected_in: usize,
        expected_out: usize,
        got_in: usize,
        got_out: usize,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Target × context count matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceTable {
    targets: Vec<String>,
    contexts: Vec<String>,
    counts: DMatrix<f64>,
}

fn check_unique(labels: &[String]) -> Result<(), DistError> {
    let mut seen = IndexSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(DistError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl CooccurrenceTable {
    pub fn new(targets: Vec<String>, contexts: Vec<String>, counts: DMatrix<f64>) -> Result<Self, DistError> {
        check_unique(&targets)?;
        check_unique(&contexts)?;
        if counts.nrows() != targets.len() || counts.ncols() != contexts.len() {
            return Err(DistError::BadSize {
                rows: targets.len(),
                cols: contexts.len(),
            });
        }
        for r in 0..counts.nrows() {
            for c in 0..counts.ncols() {
                let v = counts[(r, c)];
                if !v.is_finite() || v < 0.0 {
                    return Err(DistError::BadCount {
                        target: targets[r].clone(),
                        context: contexts[c].clone(),
                    });
                }
            }
        }
        Ok(CooccurrenceTable {
            targets,
            contexts,
            counts,
        })
    }

    pub fn from_rows(targets: &[&str], contexts: &[&str], rows: &[&[f64]]) -> Result<Self, DistError> {
        let (r, c) = (targets.len(), contexts.len());
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return Err(DistError::BadSize { rows: r, cols: c });
        }
        let counts = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
        Self::new(
            targets.iter().map(|s| s.to_string()).collect(),
            contexts.iter().map(|s| s.to_string()).collect(),
            counts,
        )
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn counts(&self) -> &DMatrix<f64> {
        &self.counts
    }

    pub fn get(&self, target: &str, context: &str) -> Option<f64> {
        let r = self.targets.iter().position(|t| t == target)?;
        let c = self.contexts.iter().position(|t| t == context)?;
        Some(self.counts[(r, c)])
    }

    pub fn row(&self, target: &str) -> Option<Vec<f64>> {
        let r = self.targets.iter().position(|t| t == target)?;
        Some(self.counts.row(r).iter().copied().collect())
    }

    /// Header row of contexts, then one row per target; tab-separated.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for c in &self.contexts {
            write!(out, "\t{c}").unwrap();
        }
        out.push('\n');
        for (r, t) in self.targets.iter().enumerate() {
            out.push_str(t);
            for c in 0..self.contexts.len() {
                write!(out, "\t{}", crate::semantics::format_value(self.counts[(r, c)])).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, DistError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or(DistError::Format {
            line: 1,
            message: "missing header row".into(),
        })?;
        let contexts: Vec<String> = header.split('\t').skip(1).map(|s| s.trim().to_string()).collect();
        let mut targets = Vec::new();
        let mut values = Vec::new();
        for (k, line) in lines {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != contexts.len() + 1 {
                return Err(DistError::Format {
                    line: k + 1,
                    message: format!("expected {} columns, found {}", contexts.len() + 1, cols.len()),
                });
            }
            targets.push(cols[0].trim().to_string());
            for v in &cols[1..] {
                values.push(v.trim().parse::<f64>().map_err(|_| DistError::Format {
                    line: k + 1,
                    message: format!("invalid number `{}`", v.trim()),
                })?);
            }
        }
        let counts = DMatrix::from_row_slice(targets.len(), contexts.len(), &values);
        Self::new(targets, contexts, counts)
    }
}

/// Assignment of context words to clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMap {
    clusters: Vec<String>,
    assign: IndexMap<String, String>,
}

impl ClusterMap {
    pub fn new(clusters: Vec<String>, assign: IndexMap<String, String>) -> Result<Self, DistError> {
        check_unique(&clusters)?;
        for c in assign.values() {
            if !clusters.contains(c) {
                return Err(DistError::UnknownCluster(c.clone()));
            }
        }
        Ok(ClusterMap { clusters, assign })
    }

    /// Builds a map from `(cluster, members)` groups, in cluster order.
    pub fn from_groups(groups: &[(&str, &[&str])]) -> Result<Self, DistError> {
        let clusters: Vec<String> = groups.iter().map(|(c, _)| c.to_string()).collect();
        let mut assign = IndexMap::new();
        for (c, members) in groups {
            for m in *members {
                if assign.insert(m.to_string(), c.to_string()).is_some() {
                    return Err(DistError::DuplicateLabel(m.to_string()));
                }
            }
        }
        Self::new(clusters, assign)
    }

    /// Every context its own cluster.
    pub fn identity(contexts: &[String]) -> Self {
        ClusterMap {
            clusters: contexts.to_vec(),
            assign: contexts.iter().map(|c| (c.clone(), c.clone())).collect(),
        }
    }

    pub fn clusters(&self) -> &[String] {
        &self.clusters
    }

    pub fn cluster_of(&self, context: &str) -> Option<&str> {
        self.assign.get(context).map(String::as_str)
    }

    /// One line per cluster: `name<TAB>member member ...`.
    pub fn from_text(text: &str) -> Result<Self, DistError> {
        let mut clusters = Vec::new();
        let mut assign = IndexMap::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, members) = line.split_once('\t').ok_or_else(|| DistError::Format {
                line: k + 1,
                message: "expected cluster<TAB>members".into(),
            })?;
            let name = name.trim().to_string();
            for m in members.split_whitespace() {
                if assign.insert(m.to_string(), name.clone()).is_some() {
                    return Err(DistError::DuplicateLabel(m.to_string()));
                }
            }
            clusters.push(name);
        }
        Self::new(clusters, assign)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.clusters {
            let members: Vec<&str> = self
                .assign
                .iter()
                .filter(|(_, v)| *v == c)
                .map(|(k, _)| k.as_str())
                .collect();
            writeln!(out, "{c}\t{}", members.join(" ")).unwrap();
        }
        out
    }
}

/// Splits a corpus into documents at blank lines; tokens are
/// whitespace-separated and lowercased.
pub fn parse_corpus(text: &str) -> Vec<Vec<String>> {
    let mut docs = Vec::new();
    let mut cur: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !cur.is_empty() {
                docs.push(std::mem::take(&mut cur));
            }
            continue;
        }
        cur.extend(line.split_whitespace().map(str::to_lowercase));
    }
    if !cur.is_empty() {
        docs.push(cur);
    }
    docs
}

/// Counts, for each target token, the context tokens at distance 1..=k
/// within the same document.
pub fn build_cooccurrence(
    corpus: &[Vec<String>],
    targets: &[String],
    contexts: &[String],
    k: usize,
) -> Result<CooccurrenceTable, DistError> {
    if k == 0 {
        return Err(DistError::ZeroWindow);
    }
    check_unique(targets)?;
    check_unique(contexts)?;
    let t_index: IndexMap<&str, usize> = targets.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let c_index: IndexMap<&str, usize> = contexts.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let mut counts = DMatrix::zeros(targets.len(), contexts.len());
    for doc in corpus {
        for (p, tok) in doc.iter().enumerate() {
            let Some(&r) = t_index.get(tok.as_str()) else {
                continue;
            };
            let lo = p.saturating_sub(k);
            let hi = (p + k).min(doc.len().saturating_sub(1));
            for q in lo..=hi {
                if q == p {
                    continue;
                }
                if let Some(&c) = c_index.get(doc[q].as_str()) {
                    counts[(r, c)] += 1.0;
                }
            }
        }
    }
    CooccurrenceTable::new(targets.to_vec(), contexts.to_vec(), counts)
}

/// Positive pointwise mutual information with grand-total normalization.
pub fn ppmi(table: &CooccurrenceTable) -> Result<CooccurrenceTable, DistError> {
    let m = &table.counts;
    let total: f64 = m.sum();
    if total <= 0.0 {
        return Err(DistError::AllZero);
    }
    let rows: Vec<f64> = (0..m.nrows()).map(|r| m.row(r).sum()).collect();
    let cols: Vec<f64> = (0..m.ncols()).map(|c| m.column(c).sum()).collect();
    let out = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        let v = m[(r, c)];
        if v == 0.0 {
            return 0.0;
        }
        // p(t,c) / (p(t) p(c)) = v·total / (row·col)
        (v * total / (rows[r] * cols[c])).ln().max(0.0)
    });
    CooccurrenceTable::new(table.targets.clone(), table.contexts.clone(), out)
}

/// Sums each row over the members of every cluster.
pub fn cluster_columns(table: &CooccurrenceTable, cmap: &ClusterMap) -> Result<CooccurrenceTable, DistError> {
    let mut slot = Vec::with_capacity(table.contexts.len());
    for c in &table.contexts {
        let name = cmap.cluster_of(c).ok_or_else(|| DistError::Unmapped(c.clone()))?;
        slot.push(cmap.clusters.iter().position(|k| k == name).expect("validated cluster"));
    }
    let mut out = DMatrix::zeros(table.targets.len(), cmap.clusters.len());
    for r in 0..table.targets.len() {
        for (c, &s) in slot.iter().enumerate() {
            out[(r, s)] += table.counts[(r, c)];
        }
    }
    CooccurrenceTable::new(table.targets.clone(), cmap.clusters.clone(), out)
}

/// Least-squares linear map `M` with `M·x ≈ y` over all pairs.
///
/// Solves the normal equations `M (X Xᵀ) = Y Xᵀ` with a pseudo-inverse, so
/// rank-deficient systems get the minimum-norm solution.
pub fn learn_linear_map(pairs: &[(Vec<f64>, Vec<f64>)]) -> Result<DMatrix<f64>, DistError> {
    let (x0, y0) = pairs.first().ok_or(DistError::NoPairs)?;
    let (din, dout) = (x0.len(), y0.len());
    for (index, (x, y)) in pairs.iter().enumerate() {
        if x.len() != din || y.len() != dout || din == 0 || dout == 0 {
            return Err(DistError::Dimension {
                index,
                expected_in: din,
                expected_out: dout,
                got_in: x.len(),
                got_out: y.len(),
            });
        }
    }
    let x = DMatrix::from_fn(din, pairs.len(), |r, c| pairs[c].0[r]);
    let y = DMatrix::from_fn(dout, pairs.len(), |r, c| pairs[c].1[r]);
    let gram = &x * x.transpose();
    let scale = gram.amax().max(f64::MIN_POSITIVE);
    let eps = scale * (din as f64) * 1e-12;
    let pinv = gram.pseudo_inverse(eps).expect("eps is non-negative");
    Ok(y * x.transpose() * pinv)
}

/// Sum of squared residuals of `m` over `pairs`.
pub fn residual(m: &DMatrix<f64>, pairs: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    pairs
        .iter()
        .map(|(x, y)| (m * DVector::from_column_slice(x) - DVector::from_column_slice(y)).norm_squared())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn hand_counts() {
        let corpus = parse_corpus("The lumberjack saw the tree\n");
        let t = build_cooccurrence(&corpus, &words("lumberjack"), &words("saw tree"), 5).unwrap();
        assert_eq!(t.row("lumberjack").unwrap(), vec![1.0, 1.0]);

        let t = build_cooccurrence(&[words("wood wood")], &words("wood"), &words("wood"), 1).unwrap();
        assert_eq!(t.get("wood", "wood"), Some(2.0));

        let t = build_cooccurrence(&[], &words("a b"), &words("c"), 3).unwrap();
        assert!(t.counts().iter().all(|&v| v == 0.0));
        assert_eq!(build_cooccurrence(&[], &words("a"), &words("c"), 0), Err(DistError::ZeroWindow));
    }

    #[test]
    fn windows_respect_documents_and_radius() {
        let corpus = parse_corpus("a x x b\n\nb a\n");
        assert_eq!(corpus.len(), 2);
        let t1 = build_cooccurrence(&corpus, &words("a"), &words("b"), 1).unwrap();
        let t3 = build_cooccurrence(&corpus, &words("a"), &words("b"), 3).unwrap();
        assert_eq!(t1.get("a", "b"), Some(1.0));
        assert_eq!(t3.get("a", "b"), Some(2.0));
    }

    #[test]
    fn ppmi_examples() {
        let one = CooccurrenceTable::from_rows(&["t"], &["c"], &[&[5.0]]).unwrap();
        assert_eq!(ppmi(&one).unwrap().counts()[(0, 0)], 0.0);

        let diag = CooccurrenceTable::from_rows(&["a", "b"], &["x", "y"], &[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let p = ppmi(&diag).unwrap();
        assert!((p.counts()[(0, 0)] - 2f64.ln()).abs() < 1e-15);
        assert_eq!(p.counts()[(0, 1)], 0.0);

        let uniform = CooccurrenceTable::from_rows(&["a", "b"], &["x", "y"], &[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(ppmi(&uniform).unwrap().counts().iter().all(|&v| v == 0.0));

        let zero = CooccurrenceTable::from_rows(&["a"], &["x"], &[&[0.0]]).unwrap();
        assert_eq!(ppmi(&zero), Err(DistError::AllZero));
    }

    #[test]
    fn clustering_lumberjack_row() {
        let ctx = ["pawn", "bank", "furniture", "log", "wood", "saw", "tree", "shirt", "boot", "beard"];
        let t = CooccurrenceTable::from_rows(
            &["lumberjack", "lombard"],
            &ctx,
            &[
                &[0., 0., 0., 50., 8., 12., 21., 2., 2., 2.],
                &[16., 26., 0., 0., 0., 0., 0., 0., 0., 0.],
            ],
        )
        .unwrap();
        let cmap = ClusterMap::from_groups(&[
            ("bank", &["pawn", "bank", "furniture"]),
            ("wood", &["log", "wood", "saw", "tree"]),
            ("fashion", &["shirt", "boot", "beard"]),
        ])
        .unwrap();
        let c = cluster_columns(&t, &cmap).unwrap();
        assert_eq!(c.row("lumberjack").unwrap(), vec![0., 91., 6.]);
        assert_eq!(c.row("lombard").unwrap(), vec![42., 0., 0.]);

        let id = cluster_columns(&t, &ClusterMap::identity(t.contexts())).unwrap();
        assert_eq!(id, t);

        let partial = ClusterMap::from_groups(&[("bank", &["pawn"])]).unwrap();
        assert_eq!(cluster_columns(&t, &partial), Err(DistError::Unmapped("bank".into())));
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            CooccurrenceTable::from_rows(&["a", "a"], &["x"], &[&[1.0], &[1.0]]),
            Err(DistError::DuplicateLabel(_))
        ));
        assert!(matches!(
            CooccurrenceTable::from_rows(&["a"], &["x"], &[&[-1.0]]),
            Err(DistError::BadCount { .. })
        ));
        assert!(ClusterMap::from_groups(&[("a", &["x"]), ("b", &["x"])]).is_err());
    }

    #[test]
    fn tsv_round_trip() {
        let t = CooccurrenceTable::from_rows(&["a", "b"], &["x", "y"], &[&[1.5, 0.0], &[0.0, 3.0]]).unwrap();
        assert_eq!(CooccurrenceTable::from_tsv(&t.to_tsv()).unwrap(), t);
        let err = CooccurrenceTable::from_tsv("\tx\ty\na\t1\n").unwrap_err();
        assert!(matches!(err, DistError::Format { line: 2, .. }));
        let cmap = ClusterMap::from_groups(&[("w", &["log", "tree"]), ("f", &["shirt"])]).unwrap();
        assert_eq!(ClusterMap::from_text(&cmap.to_text()).unwrap(), cmap);
    }

    #[test]
    fn single_pair_map_is_exact_and_minimal() {
        let pairs = vec![(vec![0., 91., 6.], vec![0., 16., 73.])];
        let m = learn_linear_map(&pairs).unwrap();
        assert!(residual(&m, &pairs) < 1e-18);
        // minimum norm: y xᵀ / |x|²
        for r in 0..3 {
            for c in 0..3 {
                let expect = pairs[0].1[r] * pairs[0].0[c] / 8317.0;
                assert!((m[(r, c)] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_pairs_give_identity() {
        let pairs: Vec<_> = (0..3)
            .map(|i| {
                let mut e = vec![0.0; 3];
                e[i] = 1.0;
                (e.clone(), e)
            })
            .collect();
        let m = learn_linear_map(&pairs).unwrap();
        assert!((m - DMatrix::<f64>::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn learn_rejects_bad_input() {
        assert_eq!(learn_linear_map(&[]), Err(DistError::NoPairs));
        assert!(matches!(
            learn_linear_map(&[(vec![1., 0.], vec![1.]), (vec![1.], vec![1.])]),
            Err(DistError::Dimension { index: 1, .. })
        ));
    }

    fn small_corpus() -> impl Strategy<Value = Vec<Vec<String>>> {
        let tok = prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(String::from);
        prop::collection::vec(prop::collection::vec(tok, 0..12), 0..4)
    }

    proptest! {
        #[test]
        fn symmetric_when_targets_equal_contexts(corpus in small_corpus(), k in 1usize..4) {
            let w = words("a b c d");
            let t = build_cooccurrence(&corpus, &w, &w, k).unwrap();
            prop_assert_eq!(t.counts(), &t.counts().transpose());
        }

        #[test]
        fn window_monotone(corpus in small_corpus(), k in 1usize..5) {
            let w = words("a b c d");
            let small = build_cooccurrence(&corpus, &w, &w, k).unwrap();
            let big = build_cooccurrence(&corpus, &w, &w, k + 1).unwrap();
            prop_assert!(small.counts().iter().zip(big.counts().iter()).all(|(a, b)| a <= b));
        }

        #[test]
        fn clustering_preserves_row_sums(rows in prop::collection::vec(prop::collection::vec(0u32..50, 4), 1..4)) {
            let targets: Vec<String> = (0..rows.len()).map(|i| format!("t{i}")).collect();
            let counts = DMatrix::from_fn(rows.len(), 4, |r, c| f64::from(rows[r][c]));
            let t = CooccurrenceTable::new(targets, words("a b c d"), counts).unwrap();
            let cmap = ClusterMap::from_groups(&[("x", &["a", "c"]), ("y", &["b", "d"])]).unwrap();
            let c = cluster_columns(&t, &cmap).unwrap();
            for r in 0..rows.len() {
                prop_assert_eq!(t.counts().row(r).sum(), c.counts().row(r).sum());
            }
        }

        #[test]
        fn removing_a_pair_never_increases_residual(
            data in prop::collection::vec((prop::collection::vec(-5.0f64..5.0, 3), prop::collection::vec(-5.0f64..5.0, 2)), 5..8),
            drop in 0usize..5,
        ) {
            let full = learn_linear_map(&data).unwrap();
            let mut fewer = data.clone();
            fewer.remove(drop);
            let part = learn_linear_map(&fewer).unwrap();
            prop_assert!(residual(&part, &fewer) <= residual(&full, &data) + 1e-9);
        }
    }
}

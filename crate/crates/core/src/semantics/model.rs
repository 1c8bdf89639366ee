//! Word models: tensors keyed by (word, type), with a text manifest format.
//!
//! Manifest lines:
//!
//! ```text
//! space N 3
//! interp i N* S
//! lumberjack<TAB>n<TAB>lumberjack.tensor
//! ```
//!
//! `interp` lines are optional; when none are present the English default
//! interpretation is used. Tensor paths are relative to the manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use indexmap::IndexMap;

use super::{interpret_term, parse_tensor_text, BasicInterpretation, Factor, SemanticsError, SpaceTable, Tensor};
use crate::grammar::parse_type_expr;
use crate::pregroup::{Term, TypePoset};

/// Default interpretation for the English fragment: noun, subject and
/// object types as `N`, sentence and question types as `S`, infinitives as
/// `N* ⊗ S`. Only names present in `poset` are mapped.
pub fn english_interpretation(poset: &TypePoset, spaces: &SpaceTable) -> Result<BasicInterpretation, SemanticsError> {
    let noun = [
        "n", "n0", "n1", "n2", "nbar", "nbar1", "nbar2", "pi", "pi1", "pi2", "pi3", "pi4", "pi5", "pi6", "o", "a",
        "abar",
    ];
    let sentence = ["s", "s1", "s2", "q", "q1", "q2", "qbar"];
    let mut map = IndexMap::new();
    for b in poset.alphabet() {
        let name = b.as_str();
        let factors = if noun.contains(&name) {
            vec![Factor::primal("N")]
        } else if sentence.contains(&name) {
            vec![Factor::primal("S")]
        } else if name == "i" || name == "j" {
            vec![Factor::dual("N"), Factor::primal("S")]
        } else {
            continue;
        };
        map.insert(b.clone(), factors);
    }
    BasicInterpretation::new(map, poset, spaces)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordModel {
    spaces: SpaceTable,
    interp: BasicInterpretation,
    tensors: IndexMap<(String, Term), Tensor>,
}

impl WordModel {
    pub fn new(spaces: SpaceTable, interp: BasicInterpretation) -> Self {
        WordModel {
            spaces,
            interp,
            tensors: IndexMap::new(),
        }
    }

    pub fn spaces(&self) -> &SpaceTable {
        &self.spaces
    }

    pub fn interpretation(&self) -> &BasicInterpretation {
        &self.interp
    }

    pub fn get(&self, word: &str, term: &Term) -> Option<&Tensor> {
        self.tensors.get(&(word.to_string(), term.clone()))
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term, &Tensor)> {
        self.tensors.iter().map(|((w, t), v)| (w.as_str(), t, v))
    }

    /// Inserts a tensor given its dims and values; the shape is derived
    /// from `term` and must match the dims.
    pub fn insert(&mut self, word: &str, term: Term, dims: Vec<usize>, values: Vec<f64>) -> Result<(), SemanticsError> {
        let shape = interpret_term(&term, &self.interp)?;
        let expected = shape.dims(&self.spaces)?;
        if expected != dims {
            return Err(SemanticsError::BadTensor(format!(
                "`{word}` : `{term}` needs dims {expected:?}, got {dims:?}"
            )));
        }
        let tensor = Tensor::new(shape, dims, values)?;
        self.tensors.insert((word.to_string(), term), tensor);
        Ok(())
    }

    /// Inserts a tensor whose shape must already equal the interpretation of `term`.
    pub fn insert_tensor(&mut self, word: &str, term: Term, tensor: Tensor) -> Result<(), SemanticsError> {
        let shape = interpret_term(&term, &self.interp)?;
        if &shape != tensor.shape() {
            return Err(SemanticsError::ShapeMismatch(shape, tensor.shape().clone()));
        }
        self.tensors.insert((word.to_string(), term), tensor);
        Ok(())
    }

    /// Parses a manifest; `read` resolves tensor file names to their text.
    pub fn from_manifest(
        text: &str,
        poset: &TypePoset,
        mut read: impl FnMut(&str) -> Result<String, String>,
    ) -> Result<Self, SemanticsError> {
        let err = |line: usize, m: String| SemanticsError::Model(format!("line {line}: {m}"));
        let mut spaces = SpaceTable::new();
        let mut interp_lines = IndexMap::new();
        let mut entries = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            if content.contains('\t') {
                let cols: Vec<&str> = content.split('\t').map(str::trim).collect();
                if cols.len() != 3 {
                    return Err(err(line, "expected word<TAB>type<TAB>file".into()));
                }
                entries.push((line, cols[0].to_string(), cols[1].to_string(), cols[2].to_string()));
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words.as_slice() {
                ["space", name, dim] => {
                    let d: usize = dim.parse().map_err(|_| err(line, format!("invalid dimension `{dim}`")))?;
                    spaces.insert(name, d).map_err(|e| err(line, e.to_string()))?;
                }
                ["interp", base, factors @ ..] => {
                    let b = poset
                        .lookup(base)
                        .ok_or_else(|| err(line, format!("undeclared basic type `{base}`")))?
                        .clone();
                    let fs = factors
                        .iter()
                        .map(|f| Factor::parse(f).ok_or_else(|| err(line, format!("invalid factor `{f}`"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    interp_lines.insert(b, fs);
                }
                _ => return Err(err(line, format!("unrecognized line `{}`", content.trim()))),
            }
        }
        let interp = if interp_lines.is_empty() {
            english_interpretation(poset, &spaces)?
        } else {
            BasicInterpretation::new(interp_lines, poset, &spaces)?
        };
        let mut model = WordModel::new(spaces, interp);
        for (line, word, ty, file) in entries {
            let term = parse_type_expr(&ty, poset).map_err(|e| err(line, e.to_string()))?;
            let body = read(&file).map_err(|e| err(line, format!("{file}: {e}")))?;
            let (dims, values) = parse_tensor_text(&body).map_err(|e| err(line, format!("{file}: {e}")))?;
            model.insert(&word, term, dims, values).map_err(|e| err(line, e.to_string()))?;
        }
        Ok(model)
    }

    /// Loads a manifest from disk; tensor files are read relative to it.
    pub fn load(path: &Path, poset: &TypePoset) -> Result<Self, SemanticsError> {
        let text = fs::read_to_string(path).map_err(|e| SemanticsError::Model(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::from_manifest(&text, poset, |f| fs::read_to_string(dir.join(f)).map_err(|e| e.to_string()))
    }

    /// Manifest text plus `(file name, tensor text)` for every entry.
    ///
    /// File names are `word.tensor`, or `word.K.tensor` for the K'th
    /// additional type of the same word.
    pub fn to_files(&self) -> (String, Vec<(String, String)>) {
        let mut manifest = String::new();
        for (name, dim) in self.spaces.iter() {
            writeln!(manifest, "space {name} {dim}").unwrap();
        }
        for (b, fs) in self.interp.iter() {
            let parts: Vec<String> = fs.iter().map(Factor::to_string).collect();
            writeln!(manifest, "interp {} {}", b, parts.join(" ")).unwrap();
        }
        let mut files = Vec::new();
        let mut seen: IndexMap<&str, usize> = IndexMap::new();
        for ((word, term), tensor) in &self.tensors {
            let count = seen.entry(word).or_insert(0);
            let file = if *count == 0 {
                format!("{word}.tensor")
            } else {
                format!("{word}.{count}.tensor")
            };
            *count += 1;
            writeln!(manifest, "{word}\t{term}\t{file}").unwrap();
            files.push((file, tensor.to_text()));
        }
        (manifest, files)
    }

    /// Writes the manifest as `dir/manifest_name` and the tensors beside it.
    pub fn save(&self, dir: &Path, manifest_name: &str) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let (manifest, files) = self.to_files();
        fs::write(dir.join(manifest_name), manifest)?;
        for (name, text) in files {
            fs::write(dir.join(name), text)?;
        }
        Ok(())
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{builtin_english, parse_term};

    fn spaces() -> SpaceTable {
        SpaceTable::new().with("N", 3).unwrap().with("S", 2).unwrap()
    }

    #[test]
    fn english_interpretation_is_consistent() {
        let g = builtin_english();
        let interp = english_interpretation(&g.poset, &spaces()).unwrap();
        for b in g.poset.alphabet() {
            assert!(interp.get(b).is_some(), "{b} uninterpreted");
        }
    }

    #[test]
    fn insert_checks_dims() {
        let g = builtin_english();
        let mut m = WordModel::new(spaces(), english_interpretation(&g.poset, &spaces()).unwrap());
        assert!(m.insert("drink", parse_term("n^r s").unwrap(), vec![3, 2], vec![0.0; 6]).is_ok());
        assert!(m.insert("drink", parse_term("n^r s").unwrap(), vec![2, 3], vec![0.0; 6]).is_err());
        assert!(m.insert("x", parse_term("n").unwrap(), vec![3], vec![1.0, f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let g = builtin_english();
        let mut m = WordModel::new(spaces(), english_interpretation(&g.poset, &spaces()).unwrap());
        m.insert("lumberjack", parse_term("n").unwrap(), vec![3], vec![0.0, 91.0, 6.0]).unwrap();
        m.insert("drink", parse_term("n^r s").unwrap(), vec![3, 2], vec![0.0, 0.0, 0.5, -0.25, 1.0, 2.0])
            .unwrap();
        m.insert("drink", parse_term("i").unwrap(), vec![3, 2], vec![0.0, 0.0, 0.5, -0.25, 1.0, 2.0])
            .unwrap();
        let (manifest, files) = m.to_files();
        assert!(manifest.contains("drink\ti\tdrink.1.tensor"));
        let back = WordModel::from_manifest(&manifest, &g.poset, |f| {
            files
                .iter()
                .find(|(n, _)| n == f)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| "missing".to_string())
        })
        .unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn manifest_errors_carry_line_numbers() {
        let g = builtin_english();
        let e = WordModel::from_manifest("space N 3\nspace S 2\nfoo\tn\n", &g.poset, |_| Err("x".into()))
            .unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = WordModel::from_manifest("space N 0\n", &g.poset, |_| Err("x".into())).unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
        let e = WordModel::from_manifest("space N 3\nspace S 2\nfoo\tn\tfoo.tensor\n", &g.poset, |_| {
            Err("no such file".into())
        })
        .unwrap_err();
        assert!(e.to_string().contains("no such file"), "{e}");
    }
}

//! Dense row-major tensors and the pairwise contraction kernel.

use std::fmt::Write as _;

use super::{SemanticsError, Shape};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Shape,
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    /// `dims` must be the dimensions of `shape` under the space table in use.
    pub fn new(shape: Shape, dims: Vec<usize>, data: Vec<f64>) -> Result<Self, SemanticsError> {
        if shape.factors.len() != dims.len() {
            return Err(SemanticsError::BadTensor(format!(
                "shape has {} factors but {} dims were given",
                shape.factors.len(),
                dims.len()
            )));
        }
        let expected: usize = dims.iter().product();
        if data.len() != expected {
            return Err(SemanticsError::BadTensor(format!(
                "expected {expected} values for dims {dims:?}, got {}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(SemanticsError::BadTensor(format!("non-finite value {v}")));
        }
        Ok(Tensor { shape, dims, data })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Same shape, values mapped elementwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            dims: self.dims.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `a·self + b·other`; shapes must agree.
    pub fn lincomb(&self, a: f64, other: &Tensor, b: f64) -> Result<Tensor, SemanticsError> {
        if self.shape != other.shape {
            return Err(SemanticsError::ShapeMismatch(self.shape.clone(), other.shape.clone()));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect(),
        })
    }

    /// Text form: `shape d1 … dk` on the first line, values after.
    pub fn to_text(&self) -> String {
        let mut out = String::from("shape");
        for d in &self.dims {
            write!(out, " {d}").unwrap();
        }
        out.push('\n');
        let vals: Vec<String> = self.data.iter().map(|v| format_value(*v)).collect();
        out.push_str(&vals.join(" "));
        out.push('\n');
        out
    }
}

/// Shortest representation that round-trips; `-0` is printed as `0`.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

/// Parses the tensor text format into dims and values.
pub fn parse_tensor_text(text: &str) -> Result<(Vec<usize>, Vec<f64>), SemanticsError> {
    let bad = |m: String| SemanticsError::BadTensor(m);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty tensor file".into()))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("shape") {
        return Err(bad("first line must start with `shape`".into()));
    }
    let dims = words
        .map(|w| match w.parse::<usize>() {
            Ok(d) if d >= 1 => Ok(d),
            _ => Err(bad(format!("invalid dimension `{w}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let data = lines
        .flat_map(str::split_whitespace)
        .map(|w| w.parse::<f64>().map_err(|_| bad(format!("invalid value `{w}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let expected: usize = dims.iter().product();
    if data.len() != expected {
        return Err(bad(format!("expected {expected} values, found {}", data.len())));
    }
    Ok((dims, data))
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// A tensor whose axes carry integer labels; the unit of work of the
/// contraction engine.
#[derive(Debug, Clone)]
pub(crate) struct Labeled {
    pub labels: Vec<usize>,
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
}

impl Labeled {
    pub fn scalar(v: f64) -> Self {
        Labeled {
            labels: Vec::new(),
            dims: Vec::new(),
            data: vec![v],
        }
    }

    pub fn axis_of(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Reorders axes so that new axis `k` is old axis `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Labeled {
        let dims: Vec<usize> = order.iter().map(|&a| self.dims[a]).collect();
        let old = strides(&self.dims);
        let src_strides: Vec<usize> = order.iter().map(|&a| old[a]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..self.data.len() {
            let off: usize = idx.iter().zip(&src_strides).map(|(i, s)| i * s).sum();
            data.push(self.data[off]);
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Labeled {
            labels: order.iter().map(|&a| self.labels[a]).collect(),
            dims,
            data,
        }
    }

    /// Sums the diagonal of axes `a` and `b`.
    pub fn trace(&self, a: usize, b: usize) -> Labeled {
        let rest: Vec<usize> = (0..self.dims.len()).filter(|&k| k != a && k != b).collect();
        let mut order = rest.clone();
        order.push(a);
        order.push(b);
        let p = self.permute(&order);
        let d = self.dims[a];
        let outer: usize = rest.iter().map(|&k| self.dims[k]).product();
        let data = (0..outer)
            .map(|o| (0..d).map(|i| p.data[o * d * d + i * d + i]).sum())
            .collect();
        Labeled {
            labels: rest.iter().map(|&k| self.labels[k]).collect(),
            dims: rest.iter().map(|&k| self.dims[k]).collect(),
            data,
        }
    }

    /// Contracts axis `a` of `self` with axis `b` of `other`; the result
    /// keeps `self`'s remaining axes followed by `other`'s.
    pub fn contract(&self, a: usize, other: &Labeled, b: usize) -> Labeled {
        let left: Vec<usize> = (0..self.dims.len()).filter(|&k| k != a).collect();
        let right: Vec<usize> = (0..other.dims.len()).filter(|&k| k != b).collect();
        let mut lo = left.clone();
        lo.push(a);
        let mut ro = vec![b];
        ro.extend(&right);
        let lp = self.permute(&lo);
        let rp = other.permute(&ro);
        let k = self.dims[a];
        let m: usize = left.iter().map(|&x| self.dims[x]).product();
        let n: usize = right.iter().map(|&x| other.dims[x]).product();
        let mut data = vec![0.0; m * n];
        for i in 0..m {
            for kk in 0..k {
                let av = lp.data[i * k + kk];
                if av == 0.0 {
                    continue;
                }
                let row = &rp.data[kk * n..(kk + 1) * n];
                for (out, bv) in data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *out += av * bv;
                }
            }
        }
        let mut labels: Vec<usize> = left.iter().map(|&x| self.labels[x]).collect();
        labels.extend(right.iter().map(|&x| other.labels[x]));
        let mut dims: Vec<usize> = left.iter().map(|&x| self.dims[x]).collect();
        dims.extend(right.iter().map(|&x| other.dims[x]));
        Labeled { labels, dims, data }
    }

    pub fn outer(&self, other: &Labeled) -> Labeled {
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            data.extend(other.data.iter().map(|b| a * b));
        }
        let mut labels = self.labels.clone();
        labels.extend(&other.labels);
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        Labeled { labels, dims, data }
    }
}

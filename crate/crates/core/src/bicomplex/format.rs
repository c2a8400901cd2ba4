//! JSON file format for bicomplexes.
//!
//! ```json
//! {
//!   "p_max": 1, "q_max": 1, "n": 1,
//!   "dims":   [{"p": 0, "q": 0, "dim": 1}, ...],
//!   "del":    [{"p": 0, "q": 0, "matrix": [["1"]]}],
//!   "delbar": [...],
//!   "conj":   [...],
//!   "gram":   [...]
//! }
//! ```
//!
//! Matrices are row-major arrays of scalars; blocks left out are zero.
//! `conj` and `gram` are optional.

use serde::{Deserialize, Serialize};

use crate::error::{BicomplexError, FormatError};
use crate::linalg::Matrix;
use crate::scalar::GaussianRational;

use super::Bicomplex;

type G = GaussianRational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimEntry {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Block {
    pub p: usize,
    pub q: usize,
    pub matrix: Vec<Vec<G>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicomplexFile {
    pub p_max: usize,
    pub q_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub dims: Vec<DimEntry>,
    #[serde(default)]
    pub del: Vec<Block>,
    #[serde(default)]
    pub delbar: Vec<Block>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conj: Option<Vec<Block>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Block>>,
}

/// A parsed bicomplex together with any Gram blocks from the same file.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedBicomplex {
    pub bicomplex: Bicomplex<G>,
    pub gram: Vec<(usize, usize, Matrix<G>)>,
}

fn to_matrix(block: &Block, rows: usize, cols: usize, what: &str) -> Result<Matrix<G>, FormatError> {
    let shape_err = || {
        FormatError::Shape(format!(
            "{what} block at ({},{}) must be {rows}x{cols}",
            block.p, block.q
        ))
    };
    if block.matrix.len() != rows || block.matrix.iter().any(|r| r.len() != cols) {
        // an empty `[]` stands for any matrix with no rows
        if !(rows == 0 && block.matrix.is_empty()) {
            return Err(shape_err());
        }
    }
    Ok(Matrix::from_rows(cols, block.matrix.clone()))
}

fn shape_error(e: BicomplexError) -> FormatError {
    FormatError::Shape(e.to_string())
}

impl BicomplexFile {
    pub fn into_bicomplex(self) -> Result<ParsedBicomplex, FormatError> {
        let mut dims = vec![vec![0; self.q_max + 1]; self.p_max + 1];
        for d in &self.dims {
            if d.p > self.p_max || d.q > self.q_max {
                return Err(FormatError::Shape(format!(
                    "dims entry ({},{}) outside bounds ({},{})",
                    d.p, d.q, self.p_max, self.q_max
                )));
            }
            dims[d.p][d.q] = d.dim;
        }
        let mut x = Bicomplex::new(self.p_max, self.q_max, &dims);
        let dims = &dims;
        x.set_n(self.n);
        let dim = |p: usize, q: usize| {
            if p <= self.p_max && q <= self.q_max {
                dims[p][q]
            } else {
                0
            }
        };
        for b in &self.del {
            let m = to_matrix(b, dim(b.p + 1, b.q), dim(b.p, b.q), "del")?;
            x.set_del(b.p, b.q, m).map_err(shape_error)?;
        }
        for b in &self.delbar {
            let m = to_matrix(b, dim(b.p, b.q + 1), dim(b.p, b.q), "delbar")?;
            x.set_delbar(b.p, b.q, m).map_err(shape_error)?;
        }
        if let Some(conj) = &self.conj {
            if self.p_max != self.q_max {
                return Err(FormatError::Shape("conj requires p_max = q_max".into()));
            }
            for b in conj {
                let m = to_matrix(b, dim(b.q, b.p), dim(b.p, b.q), "conj")?;
                x.set_conj(b.p, b.q, m).map_err(shape_error)?;
            }
            if conj.is_empty() {
                x.set_conj(0, 0, Matrix::zeros(dim(0, 0), dim(0, 0)))
                    .map_err(shape_error)?;
            }
        }
        let mut gram = Vec::new();
        for b in self.gram.iter().flatten() {
            let d = dim(b.p, b.q);
            gram.push((b.p, b.q, to_matrix(b, d, d, "gram")?));
        }
        Ok(ParsedBicomplex { bicomplex: x, gram })
    }

    pub fn from_bicomplex(x: &Bicomplex<G>) -> Self {
        let mut file = BicomplexFile {
            p_max: x.p_max(),
            q_max: x.q_max(),
            n: x.n(),
            dims: Vec::new(),
            del: Vec::new(),
            delbar: Vec::new(),
            conj: x.has_conjugation().then(Vec::new),
            gram: None,
        };
        let block = |p: usize, q: usize, m: &Matrix<G>| Block {
            p,
            q,
            matrix: m.to_rows(),
        };
        for p in 0..=x.p_max() {
            for q in 0..=x.q_max() {
                let (pi, qi) = (p as i64, q as i64);
                let d = x.dim(pi, qi);
                if d == 0 {
                    continue;
                }
                file.dims.push(DimEntry { p, q, dim: d });
                let del = x.del(pi, qi);
                if !del.is_zero() {
                    file.del.push(block(p, q, &del));
                }
                let delbar = x.delbar(pi, qi);
                if !delbar.is_zero() {
                    file.delbar.push(block(p, q, &delbar));
                }
                if let (Some(c), Some(out)) = (x.conj_block(pi, qi), file.conj.as_mut()) {
                    out.push(block(p, q, &c));
                }
            }
        }
        file
    }
}

pub fn parse_bicomplex(text: &str) -> Result<ParsedBicomplex, FormatError> {
    let file: BicomplexFile = serde_json::from_str(text)?;
    file.into_bicomplex()
}

pub fn write_bicomplex(x: &Bicomplex<G>) -> String {
    serde_json::to_string_pretty(&BicomplexFile::from_bicomplex(x)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicomplex::tests::unit_square;
    use crate::bicomplex::{zigzag_assemble, Piece};

    #[test]
    fn round_trip() {
        let sq = unit_square(true);
        let back = parse_bicomplex(&write_bicomplex(&sq)).unwrap().bicomplex;
        assert_eq!(back, sq);

        let pieces = [
            Piece::zigzag((0, 0), "up").unwrap(),
            Piece::zigzag((0, 0), "right").unwrap(),
        ];
        let x: Bicomplex<G> = zigzag_assemble(&pieces, true, None).unwrap();
        let back = parse_bicomplex(&write_bicomplex(&x)).unwrap().bicomplex;
        assert_eq!(back, x);
    }

    #[test]
    fn missing_blocks_default_to_zero() {
        let text = r#"{"p_max": 1, "q_max": 0, "dims": [{"p": 0, "q": 0, "dim": 2}, {"p": 1, "q": 0, "dim": 1}]}"#;
        let x = parse_bicomplex(text).unwrap().bicomplex;
        assert_eq!(x.del(0, 0).shape(), (1, 2));
        assert!(x.del(0, 0).is_zero());
    }

    #[test]
    fn complex_entries_and_errors() {
        let text = r#"{"p_max": 1, "q_max": 0,
            "dims": [{"p": 0, "q": 0, "dim": 1}, {"p": 1, "q": 0, "dim": 1}],
            "del": [{"p": 0, "q": 0, "matrix": [[{"re": "1/2", "im": "-3"}]]}]}"#;
        let x = parse_bicomplex(text).unwrap().bicomplex;
        assert_eq!(x.del(0, 0)[(0, 0)], G::new(
            crate::scalar::Rational::new(1.into(), 2.into()),
            crate::scalar::Rational::from_integer((-3).into()),
        ));
        let bad = text.replace("[[{", "[[\"1\", {");
        assert!(matches!(parse_bicomplex(&bad), Err(FormatError::Shape(_))));
        assert!(matches!(parse_bicomplex("{"), Err(FormatError::Json(_))));
        let unknown = text.replace("\"p_max\"", "\"colour\": 1, \"p_max\"");
        assert!(parse_bicomplex(&unknown).is_err());
    }
}

//! Direct sums of indecomposable pieces: dots, squares and zigzags.
//!
//! A zigzag is a staircase of one-dimensional spaces alternating between
//! sources (total degree `k`) and targets (degree `k+1`); every arrow goes
//! from a source to a target, by `∂` (one step right) or `∂̄` (one step up).
//! It is written as a start position plus a word of steps: `up`/`right`
//! leave a source, `down`/`left` leave a target.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::BicomplexError;
use crate::linalg::Matrix;
use crate::scalar::Field;

use super::Bicomplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Up,
    Right,
    Down,
    Left,
}

impl Step {
    fn leaves_source(self) -> bool {
        matches!(self, Step::Up | Step::Right)
    }

    fn offset(self) -> (i64, i64) {
        match self {
            Step::Up => (0, 1),
            Step::Right => (1, 0),
            Step::Down => (0, -1),
            Step::Left => (-1, 0),
        }
    }

    fn letter(self) -> char {
        match self {
            Step::Up => 'u',
            Step::Right => 'r',
            Step::Down => 'd',
            Step::Left => 'l',
        }
    }
}

impl FromStr for Step {
    type Err = BicomplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "u" | "up" => Ok(Step::Up),
            "r" | "right" => Ok(Step::Right),
            "d" | "down" => Ok(Step::Down),
            "l" | "left" => Ok(Step::Left),
            other => Err(BicomplexError::InvalidPlacement(format!("unknown step `{other}`"))),
        }
    }
}

/// Parses a comma- or space-separated word such as `"up,right"` or `"d r"`.
pub fn parse_word(word: &str) -> Result<Vec<Step>, BicomplexError> {
    word.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Piece {
    Dot { p: usize, q: usize },
    Square { p: usize, q: usize },
    Zigzag { start: (usize, usize), word: Vec<Step> },
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Dot { p, q } => write!(f, "dot({p},{q})"),
            Piece::Square { p, q } => write!(f, "square({p},{q})"),
            Piece::Zigzag { start, word } => {
                let w: Vec<String> = word.iter().map(|s| s.letter().to_string()).collect();
                write!(f, "zigzag({},{};{})", start.0, start.1, w.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arrow {
    Del,
    Delbar,
}

/// A piece unfolded into vertices and signed arrows between them.
#[derive(Clone, Debug)]
struct Shape {
    vertices: Vec<(i64, i64)>,
    /// `(from, to, arrow, sign)` by vertex index.
    edges: Vec<(usize, usize, Arrow, i64)>,
    /// Sorted `(p, q, is_source)`; equal keys mean equal pieces up to
    /// isomorphism.
    key: Vec<(i64, i64, bool)>,
    square: bool,
}

impl Piece {
    pub fn zigzag(start: (usize, usize), word: &str) -> Result<Self, BicomplexError> {
        Ok(Piece::Zigzag {
            start,
            word: parse_word(word)?,
        })
    }

    fn shape(&self) -> Result<Shape, BicomplexError> {
        match *self {
            Piece::Dot { p, q } => Ok(Shape {
                vertices: vec![(p as i64, q as i64)],
                edges: Vec::new(),
                key: vec![(p as i64, q as i64, true)],
                square: false,
            }),
            Piece::Square { p, q } => {
                let (p, q) = (p as i64, q as i64);
                Ok(Shape {
                    vertices: vec![(p, q), (p + 1, q), (p, q + 1), (p + 1, q + 1)],
                    edges: vec![
                        (0, 1, Arrow::Del, 1),
                        (0, 2, Arrow::Delbar, 1),
                        (1, 3, Arrow::Delbar, 1),
                        (2, 3, Arrow::Del, -1),
                    ],
                    key: vec![(p, q, true)],
                    square: true,
                })
            }
            Piece::Zigzag { start, ref word } => zigzag_shape(start, word),
        }
    }

    /// The piece with positions transposed and `∂`, `∂̄` exchanged.
    pub fn mirror(&self) -> Piece {
        match self {
            Piece::Dot { p, q } => Piece::Dot { p: *q, q: *p },
            Piece::Square { p, q } => Piece::Square { p: *q, q: *p },
            Piece::Zigzag { start, word } => Piece::Zigzag {
                start: (start.1, start.0),
                word: word
                    .iter()
                    .map(|s| match s {
                        Step::Up => Step::Right,
                        Step::Right => Step::Up,
                        Step::Down => Step::Left,
                        Step::Left => Step::Down,
                    })
                    .collect(),
            },
        }
    }

    /// Largest `p` and `q` touched by the piece.
    pub fn extent(&self) -> Result<(usize, usize), BicomplexError> {
        let s = self.shape()?;
        let p = s.vertices.iter().map(|v| v.0).max().unwrap_or(0);
        let q = s.vertices.iter().map(|v| v.1).max().unwrap_or(0);
        Ok((p as usize, q as usize))
    }

    /// Isomorphism-class key: pieces with equal keys give isomorphic
    /// complexes.
    pub fn canonical_key(&self) -> Result<Vec<(i64, i64, bool)>, BicomplexError> {
        let s = self.shape()?;
        let mut key = s.key;
        if s.square {
            key.push((-1, -1, false));
        }
        Ok(key)
    }
}

fn zigzag_shape(start: (usize, usize), word: &[Step]) -> Result<Shape, BicomplexError> {
    let invalid = |msg: String| BicomplexError::InvalidPlacement(msg);
    let mut pos = (start.0 as i64, start.1 as i64);
    let mut at_source = word.first().map_or(true, |s| s.leaves_source());
    let mut vertices = vec![pos];
    let mut roles = vec![at_source];
    let mut edges = Vec::new();
    for (i, &step) in word.iter().enumerate() {
        if step.leaves_source() != at_source {
            return Err(invalid(format!(
                "step {} `{:?}` cannot leave a {}",
                i + 1,
                step,
                if at_source { "source" } else { "target" }
            )));
        }
        let (dp, dq) = step.offset();
        let next = (pos.0 + dp, pos.1 + dq);
        if next.0 < 0 || next.1 < 0 {
            return Err(invalid(format!("step {} leaves the first quadrant", i + 1)));
        }
        if vertices.contains(&next) {
            return Err(invalid(format!("step {} revisits ({},{})", i + 1, next.0, next.1)));
        }
        let cur = vertices.len() - 1;
        vertices.push(next);
        roles.push(!at_source);
        let arrow = match step {
            Step::Up | Step::Down => Arrow::Delbar,
            Step::Right | Step::Left => Arrow::Del,
        };
        let (from, to) = if at_source { (cur, cur + 1) } else { (cur + 1, cur) };
        edges.push((from, to, arrow, 1));
        pos = next;
        at_source = !at_source;
    }
    let mut key: Vec<(i64, i64, bool)> = vertices
        .iter()
        .zip(&roles)
        .map(|(&(p, q), &r)| (p, q, r))
        .collect();
    key.sort();
    Ok(Shape {
        vertices,
        edges,
        key,
        square: false,
    })
}

/// Builds the direct sum of `pieces`. With `conjugation`, every piece must
/// have its mirror image in the list (a piece may be its own mirror), and
/// the conjugation exchanging them is attached.
///
/// `bounds` widens the result to at least the given `(p_max, q_max)`.
pub fn zigzag_assemble<F: Field>(
    pieces: &[Piece],
    conjugation: bool,
    bounds: Option<(usize, usize)>,
) -> Result<Bicomplex<F>, BicomplexError> {
    let shapes: Vec<Shape> = pieces.iter().map(Piece::shape).collect::<Result<_, _>>()?;
    let mut reach = (0usize, 0usize);
    for s in &shapes {
        for &(p, q) in &s.vertices {
            reach = (reach.0.max(p as usize), reach.1.max(q as usize));
        }
    }
    let (mut p_max, mut q_max) = reach;
    if let Some((bp, bq)) = bounds {
        if reach.0 > bp || reach.1 > bq {
            return Err(BicomplexError::InvalidPlacement(format!(
                "pieces reach ({},{}) beyond bounds ({bp},{bq})",
                reach.0, reach.1
            )));
        }
        (p_max, q_max) = (bp, bq);
    }
    if conjugation {
        p_max = p_max.max(q_max);
        q_max = p_max;
    }

    // index[s][v] = position of vertex v of shape s inside its V^{p,q}
    let mut dims = vec![vec![0usize; q_max + 1]; p_max + 1];
    let index: Vec<Vec<usize>> = shapes
        .iter()
        .map(|s| {
            s.vertices
                .iter()
                .map(|&(p, q)| {
                    let slot = &mut dims[p as usize][q as usize];
                    *slot += 1;
                    *slot - 1
                })
                .collect()
        })
        .collect();

    let mut x: Bicomplex<F> = Bicomplex::new(p_max, q_max, &dims);
    let mut del: Vec<Vec<Matrix<F>>> = (0..=p_max as i64)
        .map(|p| (0..=q_max as i64).map(|q| x.del(p, q).into_owned()).collect())
        .collect();
    let mut delbar: Vec<Vec<Matrix<F>>> = (0..=p_max as i64)
        .map(|p| (0..=q_max as i64).map(|q| x.delbar(p, q).into_owned()).collect())
        .collect();
    for (s, shape) in shapes.iter().enumerate() {
        for &(from, to, arrow, sign) in &shape.edges {
            let (p, q) = shape.vertices[from];
            let grid = match arrow {
                Arrow::Del => &mut del,
                Arrow::Delbar => &mut delbar,
            };
            grid[p as usize][q as usize][(index[s][to], index[s][from])] = F::from_i64(sign);
        }
    }
    for p in 0..=p_max {
        for q in 0..=q_max {
            x.set_del(p, q, std::mem::replace(&mut del[p][q], Matrix::zeros(0, 0)))?;
            x.set_delbar(p, q, std::mem::replace(&mut delbar[p][q], Matrix::zeros(0, 0)))?;
        }
    }

    if conjugation {
        attach_conjugation(&mut x, pieces, &shapes, &index)?;
    }
    Ok(x)
}

/// Sign and partner vertex of `σ` on each vertex of a piece mapped onto its
/// mirror partner.
fn mirror_vertex_map(shape: &Shape, partner: &Shape) -> Vec<(usize, i64)> {
    if shape.square {
        // x ↦ x', e1 = ∂x ↦ ∂̄x' = e2', e2 ↦ e1', y ↦ -y'
        return vec![(0, 1), (2, 1), (1, 1), (3, -1)];
    }
    shape
        .vertices
        .iter()
        .map(|&(p, q)| {
            let j = partner
                .vertices
                .iter()
                .position(|&v| v == (q, p))
                .expect("mirror shapes have transposed vertices");
            (j, 1)
        })
        .collect()
}

fn attach_conjugation<F: Field>(
    x: &mut Bicomplex<F>,
    pieces: &[Piece],
    shapes: &[Shape],
    index: &[Vec<usize>],
) -> Result<(), BicomplexError> {
    let keys: Vec<Vec<(i64, i64, bool)>> = pieces
        .iter()
        .map(Piece::canonical_key)
        .collect::<Result<_, _>>()?;
    let mut partner: Vec<Option<usize>> = vec![None; pieces.len()];
    for i in 0..pieces.len() {
        if partner[i].is_some() {
            continue;
        }
        let want = pieces[i].mirror().canonical_key()?;
        let j = if want == keys[i] {
            Some(i)
        } else {
            (i + 1..pieces.len()).find(|&j| partner[j].is_none() && keys[j] == want)
        };
        match j {
            Some(j) => {
                partner[i] = Some(j);
                partner[j] = Some(i);
            }
            None => {
                return Err(BicomplexError::NotMirrorSymmetric(format!(
                    "{} has no mirror partner {}",
                    pieces[i],
                    pieces[i].mirror()
                )))
            }
        }
    }

    let r = x.p_max();
    let mut blocks: Vec<Vec<Matrix<F>>> = (0..=r as i64)
        .map(|p| {
            (0..=r as i64)
                .map(|q| Matrix::zeros(x.dim(q, p), x.dim(p, q)))
                .collect()
        })
        .collect();
    for (i, shape) in shapes.iter().enumerate() {
        let j = partner[i].expect("all paired");
        let map = mirror_vertex_map(shape, &shapes[j]);
        for (v, &(w, sign)) in map.iter().enumerate() {
            let (p, q) = shape.vertices[v];
            blocks[p as usize][q as usize][(index[j][w], index[i][v])] = F::from_i64(sign);
        }
    }
    for (p, row) in blocks.into_iter().enumerate() {
        for (q, m) in row.into_iter().enumerate() {
            x.set_conj(p, q, m)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicomplex::tests::unit_square;
    use crate::scalar::GaussianRational as G;

    fn assemble(pieces: &[Piece], conj: bool) -> Bicomplex<G> {
        zigzag_assemble(pieces, conj, None).unwrap()
    }

    #[test]
    fn dot_and_square() {
        let x = assemble(&[Piece::Dot { p: 0, q: 0 }], false);
        assert_eq!(x, Bicomplex::dot(0, 0));
        let sq = assemble(&[Piece::Square { p: 0, q: 0 }], false);
        assert_eq!(sq, unit_square(true));
        assert!(sq.is_valid());
    }

    #[test]
    fn words_parse_in_long_and_short_form() {
        assert_eq!(parse_word("up, right").unwrap(), vec![Step::Up, Step::Right]);
        assert_eq!(parse_word("d r").unwrap(), vec![Step::Down, Step::Right]);
        assert!(parse_word("sideways").is_err());
    }

    #[test]
    fn invalid_words_are_rejected() {
        // two steps out of a source in a row
        assert!(Piece::zigzag((0, 0), "u,r").unwrap().shape().is_err());
        // returning to the start
        assert!(Piece::zigzag((0, 0), "u,d").unwrap().shape().is_err());
        // leaving the quadrant
        assert!(Piece::zigzag((0, 0), "d").unwrap().shape().is_err());
    }

    #[test]
    fn mirror_pairs_carry_conjugation() {
        let pieces = [
            Piece::zigzag((0, 0), "up").unwrap(),
            Piece::zigzag((0, 0), "right").unwrap(),
        ];
        let x = assemble(&pieces, true);
        assert!(x.is_valid(), "{:?}", x.validate());
        assert!(x.has_conjugation());
        let err = zigzag_assemble::<G>(&pieces[..1], true, None).unwrap_err();
        assert!(matches!(err, BicomplexError::NotMirrorSymmetric(_)));
    }

    #[test]
    fn self_mirror_pieces() {
        for pieces in [
            vec![Piece::Square { p: 1, q: 1 }],
            vec![Piece::Square { p: 0, q: 1 }, Piece::Square { p: 1, q: 0 }],
            vec![Piece::zigzag((0, 1), "d,r").unwrap()],
            vec![Piece::zigzag((0, 1), "r,d").unwrap()],
            vec![Piece::Dot { p: 1, q: 1 }, Piece::Dot { p: 2, q: 0 }, Piece::Dot { p: 0, q: 2 }],
        ] {
            let x = assemble(&pieces, true);
            assert!(x.is_valid(), "{pieces:?}: {:?}", x.validate());
        }
    }
}

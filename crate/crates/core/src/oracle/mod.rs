//! Small explicit designs and literal counting.
//!
//! Every formula in [`crate::design`], [`crate::block_graph`] and
//! [`crate::criteria`] is cross-checked here against a design whose blocks
//! are written out: the 2-(n,2,1) design of all pairs, the 2-(6,3,2) design,
//! and the Steiner system S(4,7,23) from the binary lexicode of length 23
//! and distance 7.
//!
//! Designs export to a plain text format: a first line `v b`, then one block
//! per line as space-separated 0-based point indices.

pub mod lexicode;
mod verify;

pub use verify::{
    measure, verify_design, Measured, MeasuredSrg, Mismatch, OracleReport, TripleSums,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid design: {0}")]
    Invalid(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not a 2-design: {0}")]
    NotTwoDesign(String),
    #[error("not quasisymmetric: block intersection sizes {0:?}")]
    NotQuasisymmetric(Vec<usize>),
    #[error("block graph is not strongly regular: {0}")]
    NotStronglyRegular(String),
    #[error("block graph spectrum is not integral: {0}")]
    Spectrum(String),
    #[error("construction self-check failed: {0}")]
    Construction(String),
    #[error("{} measured value(s) disagree with the formulas: {}", .0.len(), .0.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("; "))]
    Mismatch(Vec<Mismatch>),
}

/// Points `0..v` and a list of equal-size blocks, each sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitDesign {
    v: usize,
    blocks: Vec<Vec<usize>>,
}

impl ExplicitDesign {
    pub fn new(v: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, OracleError> {
        if blocks.is_empty() {
            return Err(OracleError::Invalid("no blocks".into()));
        }
        let k = blocks[0].len();
        for (i, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            if b.len() != k {
                return Err(OracleError::Invalid(format!(
                    "block {i} has size {} (expected {k})",
                    b.len()
                )));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(OracleError::Invalid(format!("block {i} repeats a point")));
            }
            if b.last().is_some_and(|&p| p >= v) {
                return Err(OracleError::Invalid(format!("block {i} has a point >= {v}")));
            }
        }
        Ok(ExplicitDesign { v, blocks })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The design with every block replaced by its complement.
    pub fn complement(&self) -> Result<Self, OracleError> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| (0..self.v).filter(|p| b.binary_search(p).is_err()).collect())
            .collect();
        ExplicitDesign::new(self.v, blocks)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.v, self.blocks.len());
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(|p| p.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, OracleError> {
        let mut lines = text.lines().enumerate();
        let parse_err = |line: usize, msg: &str| OracleError::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (_, header) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
        let hv: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(0, "expected `v b`")))
            .collect::<Result<_, _>>()?;
        let [v, b] = hv[..] else {
            return Err(parse_err(0, "expected `v b`"));
        };
        let mut blocks = Vec::with_capacity(b);
        for (i, line) in lines {
            let block = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(i, "expected point indices")))
                .collect::<Result<Vec<usize>, _>>()?;
            blocks.push(block);
        }
        if blocks.len() != b {
            return Err(parse_err(0, &format!("header says {b} blocks, found {}", blocks.len())));
        }
        ExplicitDesign::new(v, blocks)
    }
}

/// All 2-subsets of an `n`-set.
pub fn build_pair_design(n: usize) -> Result<ExplicitDesign, OracleError> {
    if n < 3 {
        return Err(OracleError::Invalid(format!("pair design needs n >= 3 (got {n})")));
    }
    let mut blocks = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            blocks.push(vec![i, j]);
        }
    }
    ExplicitDesign::new(n, blocks)
}

/// The 2-(6,3,2) design. Its intersection-2 graph is the Petersen graph.
pub fn build_6_3_2() -> ExplicitDesign {
    let blocks = [
        [0, 1, 2],
        [0, 1, 3],
        [0, 2, 4],
        [0, 3, 5],
        [0, 4, 5],
        [1, 2, 5],
        [1, 3, 4],
        [1, 4, 5],
        [2, 3, 4],
        [2, 3, 5],
    ];
    ExplicitDesign::new(6, blocks.iter().map(|b| b.to_vec()).collect())
        .expect("fixed block list is valid")
}

/// S(4,7,23): supports of the weight-7 words of the binary lexicode of
/// length 23 and minimum distance 7.
pub fn build_witt_23() -> Result<ExplicitDesign, OracleError> {
    let code = lexicode::span(&lexicode::lexicode_basis(23, 7));
    if code.len() != 4096 {
        return Err(OracleError::Construction(format!("code has {} words", code.len())));
    }
    let mut blocks: Vec<Vec<usize>> = code
        .iter()
        .filter(|w| w.count_ones() == 7)
        .map(|&w| (0..23).filter(|i| w >> i & 1 == 1).collect())
        .collect();
    blocks.sort();
    // every 4-set in exactly one block
    let mut cover = vec![0u8; 1 << 23];
    for &w in code.iter().filter(|w| w.count_ones() == 7) {
        let pts: Vec<u32> = (0..23).filter(|i| w >> i & 1 == 1).collect();
        for a in 0..7 {
            for b in a + 1..7 {
                for c in b + 1..7 {
                    for d in c + 1..7 {
                        let m = 1 << pts[a] | 1 << pts[b] | 1 << pts[c] | 1 << pts[d];
                        cover[m as usize] += 1;
                    }
                }
            }
        }
    }
    let bad = (0u32..1 << 23)
        .filter(|m| m.count_ones() == 4)
        .any(|m| cover[m as usize] != 1);
    if bad {
        return Err(OracleError::Construction("some 4-set not covered exactly once".into()));
    }
    ExplicitDesign::new(23, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_design_shapes() {
        let d = build_pair_design(8).unwrap();
        assert_eq!(d.blocks().len(), 28);
        let m = measure(&d).unwrap();
        assert_eq!((m.x, m.y), (1, 0));

        let d = build_pair_design(4).unwrap();
        assert_eq!(d.blocks().len(), 6);
        let m = measure(&d).unwrap();
        assert_eq!((m.x, m.y), (1, 0));

        let d = build_pair_design(3).unwrap();
        assert_eq!(d.blocks().len(), 3);
        assert_eq!(measure(&d), Err(OracleError::NotQuasisymmetric(vec![1])));

        assert!(build_pair_design(2).is_err());
    }

    #[test]
    fn design_6_3_2() {
        let d = build_6_3_2();
        let m = measure(&d).unwrap();
        assert_eq!((m.v, m.k, m.lambda, m.b, m.r, m.x, m.y), (6, 3, 2, 10, 5, 2, 1));
        assert_eq!(
            (m.srg.k, m.srg.lambda, m.srg.mu),
            (3, 0, 1)
        );
        assert!(!m.three_design);
    }

    #[test]
    fn text_round_trip() {
        let d = build_6_3_2();
        let text = d.to_text();
        assert!(text.starts_with("6 10\n0 1 2\n"));
        assert_eq!(ExplicitDesign::from_text(&text).unwrap(), d);
    }

    #[test]
    fn text_errors() {
        assert!(matches!(ExplicitDesign::from_text(""), Err(OracleError::Parse { .. })));
        assert!(matches!(
            ExplicitDesign::from_text("3 2\n0 1\n"),
            Err(OracleError::Parse { .. })
        ));
        assert!(matches!(
            ExplicitDesign::from_text("3 1\n0 x\n"),
            Err(OracleError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            ExplicitDesign::from_text("3 1\n0 5\n"),
            Err(OracleError::Invalid(_))
        ));
        assert!(matches!(
            ExplicitDesign::from_text("3 2\n0 1\n0 1 2\n"),
            Err(OracleError::Invalid(_))
        ));
    }

    #[test]
    fn complement_of_blocks() {
        let d = build_pair_design(4).unwrap();
        let c = d.complement().unwrap();
        assert_eq!(c.k(), 2);
        assert_eq!(c.blocks()[0], vec![2, 3]);
    }
}

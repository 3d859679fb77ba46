//! Built-in reference pair: `A` is 6x5, `W` is 5x6, with `Ind(AW) = Ind(WA) = 3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geninv::WeightedPair;
use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureName {
    Ex41,
}

impl FixtureName {
    pub fn matrices(self) -> (ComplexMatrix, ComplexMatrix) {
        match self {
            FixtureName::Ex41 => (ex41_a(), ex41_w()),
        }
    }

    pub fn pair(self) -> Result<WeightedPair> {
        let (a, w) = self.matrices();
        WeightedPair::new(a, w)
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureName::Ex41 => "ex41",
        })
    }
}

impl FromStr for FixtureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex41" => Ok(FixtureName::Ex41),
            other => Err(Error::UnknownName {
                kind: "fixture",
                name: other.to_string(),
            }),
        }
    }
}

fn build(rows: usize, cols: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
    ComplexMatrix::from_row_major(rows, cols, entries.iter().map(|&(re, im)| C64::new(re, im)).collect())
        .expect("fixture data is well formed")
}

pub fn ex41_a() -> ComplexMatrix {
    const O: (f64, f64) = (0.0, 0.0);
    const R: (f64, f64) = (1.0, 0.0);
    const I: (f64, f64) = (0.0, 1.0);
    const RI: (f64, f64) = (1.0, 1.0);
    build(
        6,
        5,
        &[
            RI, R, R, O, O, //
            O, O, I, RI, O, //
            O, O, O, RI, O, //
            O, O, O, I, O, //
            RI, RI, R, O, O, //
            O, O, O, O, O,
        ],
    )
}

pub fn ex41_w() -> ComplexMatrix {
    const O: (f64, f64) = (0.0, 0.0);
    const R: (f64, f64) = (1.0, 0.0);
    const I: (f64, f64) = (0.0, 1.0);
    const RI: (f64, f64) = (1.0, 1.0);
    build(
        5,
        6,
        &[
            I, I, I, I, R, O, //
            RI, O, O, O, RI, O, //
            I, O, RI, I, I, O, //
            O, O, O, O, O, O, //
            O, O, O, O, O, O,
        ],
    )
}

/// Printed reference values of `A^{wm,W}` on the fixture for `m = 1, 2, 3`
/// (five significant digits), row-major 6x5.
pub fn ex41_printed_wmwg(m: usize) -> Option<ComplexMatrix> {
    let c = |re: f64, im: f64| (re, im);
    let z = (0.0, 0.0);
    let zero_row = [z; 5];
    let rows: [[(f64, f64); 5]; 6] = match m {
        1 => [
            [c(-0.015936, -0.019648), c(-0.018135, -0.010885), c(-0.016389, -0.0029943), c(-0.0028846, -0.0092937), z],
            [c(0.007488, -0.002816), c(0.0050789, -0.004352), c(0.0025371, -0.0046171), c(0.0030766, 6.4e-05), z],
            zero_row,
            zero_row,
            [c(-0.011264, -0.029952), c(-0.017408, -0.020315), c(-0.018469, -0.010149), c(0.000256, -0.012306), z],
            zero_row,
        ],
        2 => [
            [c(-0.015936, -0.019648), c(-0.019318, -0.011368), c(-0.014723, -0.0036941), c(0.0018101, -0.015382), z],
            [c(0.007488, -0.002816), c(0.0053421, -0.0046586), c(0.0025805, -0.0040474), c(0.0044335, 0.0020812), z],
            zero_row,
            zero_row,
            [c(-0.011264, -0.029952), c(-0.018634, -0.021368), c(-0.016189, -0.010322), c(0.0083248, -0.017734), z],
            zero_row,
        ],
        3 => [
            [c(-0.015936, -0.019648), c(-0.019318, -0.011368), c(-0.014723, -0.0036941), c(0.0023692, -0.015264), z],
            [c(0.007488, -0.002816), c(0.0053421, -0.0046586), c(0.0025805, -0.0040474), c(0.0043422, 0.0022371), z],
            zero_row,
            zero_row,
            [c(-0.011264, -0.029952), c(-0.018634, -0.021368), c(-0.016189, -0.010322), c(0.0089485, -0.017369), z],
            zero_row,
        ],
        _ => return None,
    };
    let flat: Vec<(f64, f64)> = rows.iter().flatten().copied().collect();
    Some(build(6, 5, &flat))
}

/// Printed weighted core-EP inverse of the fixture.
pub fn ex41_printed_weighted_core_ep() -> ComplexMatrix {
    let c = |re: f64, im: f64| (re, im);
    let z = (0.0, 0.0);
    let zero_row = [z; 5];
    let rows: [[(f64, f64); 5]; 6] = [
        [c(-0.0093714, -0.0086857), c(-0.018743, -0.017371), c(-0.018057, 0.00068571), z, z],
        [c(0.0035429, -0.0019429), c(0.0070857, -0.0038857), c(0.0016, -0.0054857), z, z],
        zero_row,
        zero_row,
        [c(-0.0077714, -0.014171), c(-0.015543, -0.028343), c(-0.021943, -0.0064), z, z],
        zero_row,
    ];
    let flat: Vec<(f64, f64)> = rows.iter().flatten().copied().collect();
    build(6, 5, &flat)
}

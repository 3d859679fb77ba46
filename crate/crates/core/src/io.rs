//! Matrix files: `{"rows": q, "cols": n, "data": [[re, im], ...]}`, row-major.
//!
//! Floats are written in shortest round-trip form, so a write followed by a
//! parse reproduces every entry bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            data: a.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::MatrixFile(format!(
                "dimensions must be positive, got {}x{}",
                self.rows, self.cols
            )));
        }
        let data = self.data.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::from_row_major(self.rows, self.cols, data)
    }
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::MatrixFile(format!("malformed JSON: {e}")))?;
    file.into_matrix()
}

pub fn matrix_to_json(a: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(a)).expect("finite matrices always serialize")
}

pub fn parse_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::MatrixFile(format!("cannot read {}: {e}", path.display())))?;
    matrix_from_json(&text)
}

pub fn write_matrix(path: impl AsRef<Path>, a: &ComplexMatrix) -> Result<()> {
    let path = path.as_ref();
    let mut text = matrix_to_json(a);
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::MatrixFile(format!("cannot write {}: {e}", path.display())))
}

//! Matrices with a parity format, Berezinians and their cofactor calculus.
//!
//! Rows and columns carry parity labels in any order. Blocks `A₀₀, A₀₁,
//! A₁₀, A₁₁` are extracted on the fly by listing the lines of each parity
//! in their original order, so non-standard formats (such as the
//! alternating format of Wroński matrices) are never rewritten.
//!
//! A matrix may carry one explicit *wrong* line: an even (for `Ber`) or odd
//! (for `Ber*`) row or column whose entries have the opposite parity.

mod ber;
pub mod linalg;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Parity, Scalar};
pub use ber::*;
use linalg::Mat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixFormat {
    pub rows: Vec<Parity>,
    pub cols: Vec<Parity>,
}

impl MatrixFormat {
    pub fn new(rows: Vec<Parity>, cols: Vec<Parity>) -> Self {
        MatrixFormat { rows, cols }
    }

    /// Square format with the same labels on rows and columns.
    pub fn square(labels: Vec<Parity>) -> Self {
        MatrixFormat {
            rows: labels.clone(),
            cols: labels,
        }
    }

    /// Standard `p|q` format: `p` even lines, then `q` odd ones.
    pub fn standard(p: usize, q: usize) -> Self {
        let labels = std::iter::repeat_n(Parity::Even, p)
            .chain(std::iter::repeat_n(Parity::Odd, q))
            .collect();
        Self::square(labels)
    }

    /// Labels `0, 1, 0, 1, …` of length `n`.
    pub fn alternating(n: usize) -> Self {
        Self::square((0..n).map(Parity::from).collect())
    }

    /// Π-transpose: every label flipped.
    pub fn pi(&self) -> Self {
        MatrixFormat {
            rows: self.rows.iter().map(|p| p.flip()).collect(),
            cols: self.cols.iter().map(|p| p.flip()).collect(),
        }
    }

    /// Indices of the lines with parity `p`, in order.
    pub fn row_class(&self, p: Parity) -> Vec<usize> {
        class(&self.rows, p)
    }

    pub fn col_class(&self, p: Parity) -> Vec<usize> {
        class(&self.cols, p)
    }

    /// Stable permutation to standard format: `perm[k]` is the original
    /// index of the `k`-th line after sorting.
    pub fn standard_row_permutation(&self) -> Vec<usize> {
        let mut v = self.row_class(Parity::Even);
        v.extend(self.row_class(Parity::Odd));
        v
    }

    /// Position of a line among the lines of the same parity.
    pub fn row_rank(&self, i: usize) -> usize {
        self.rows[..i].iter().filter(|&&p| p == self.rows[i]).count()
    }

    pub fn col_rank(&self, j: usize) -> usize {
        self.cols[..j].iter().filter(|&&p| p == self.cols[j]).count()
    }

    /// `(even, odd)` counts of rows.
    pub fn row_dims(&self) -> (usize, usize) {
        let odd = self.rows.iter().filter(|p| p.is_odd()).count();
        (self.rows.len() - odd, odd)
    }

    /// Compact label text such as `+-+`.
    pub fn label_text(labels: &[Parity]) -> String {
        labels
            .iter()
            .map(|p| if p.is_even() { '+' } else { '-' })
            .collect()
    }
}

fn class(labels: &[Parity], p: Parity) -> Vec<usize> {
    labels
        .iter()
        .enumerate()
        .filter(|(_, &q)| q == p)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Line {
    Row(usize),
    Col(usize),
}

/// The four parity blocks of a matrix.
#[derive(Clone, Debug)]
pub struct Blocks<S> {
    pub a00: Mat<S>,
    pub a01: Mat<S>,
    pub a10: Mat<S>,
    pub a11: Mat<S>,
}

#[derive(Clone, PartialEq)]
pub struct FormatMatrix<S: Scalar> {
    entries: Mat<S>,
    format: MatrixFormat,
    wrong: Option<Line>,
}

impl<S: Scalar> FormatMatrix<S> {
    pub fn new(entries: Mat<S>, format: MatrixFormat) -> Result<Self> {
        if entries.len() != format.rows.len()
            || entries.iter().any(|r| r.len() != format.cols.len())
        {
            return Err(Error::DimensionMismatch(format!(
                "entries do not match a {}x{} format",
                format.rows.len(),
                format.cols.len()
            )));
        }
        Ok(FormatMatrix {
            entries,
            format,
            wrong: None,
        })
    }

    pub fn identity(format: MatrixFormat, template: &S) -> Self {
        let n = format.rows.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { template.one_like() } else { template.zero_like() })
                    .collect()
            })
            .collect();
        FormatMatrix {
            entries,
            format,
            wrong: None,
        }
    }

    /// Marks one line as wrong.
    pub fn with_wrong(mut self, line: Option<Line>) -> Self {
        self.wrong = line;
        self
    }

    pub fn wrong(&self) -> Option<Line> {
        self.wrong
    }

    pub fn format(&self) -> &MatrixFormat {
        &self.format
    }

    pub fn entries(&self) -> &Mat<S> {
        &self.entries
    }

    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.format.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i]
    }

    pub fn template(&self) -> S {
        self.entries
            .iter()
            .flatten()
            .next()
            .map(|e| e.zero_like())
            .expect("template of an empty matrix")
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Expected parity of entry `(i, j)` in a matrix of parity `p`, taking
    /// the wrong line into account.
    pub fn expected_parity(&self, i: usize, j: usize, p: Parity) -> Parity {
        let base = self.format.rows[i] + self.format.cols[j] + p;
        match self.wrong {
            Some(Line::Row(r)) if r == i => base.flip(),
            Some(Line::Col(c)) if c == j => base.flip(),
            _ => base,
        }
    }

    /// Checks every entry against the matrix parity `p`.
    pub fn check_parity(&self, p: Parity) -> Result<()> {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let want = self.expected_parity(i, j, p);
                if !self.entries[i][j].has_parity(want) {
                    return Err(Error::IllegalWrongness(format!(
                        "entry ({i},{j}) = {} should be {want} in an {p} matrix{}",
                        self.entries[i][j],
                        match self.wrong {
                            Some(l) => format!(" with wrong line {l:?}"),
                            None => String::new(),
                        }
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_even(&self) -> bool {
        self.wrong.is_none() && self.check_parity(Parity::Even).is_ok()
    }

    pub fn pi(&self) -> Self {
        FormatMatrix {
            entries: self.entries.clone(),
            format: self.format.pi(),
            wrong: self.wrong,
        }
    }

    pub fn blocks(&self) -> Blocks<S> {
        let pick = |rp: Parity, cp: Parity| -> Mat<S> {
            let cols = self.format.col_class(cp);
            self.format
                .row_class(rp)
                .into_iter()
                .map(|i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect()
        };
        Blocks {
            a00: pick(Parity::Even, Parity::Even),
            a01: pick(Parity::Even, Parity::Odd),
            a10: pick(Parity::Odd, Parity::Even),
            a11: pick(Parity::Odd, Parity::Odd),
        }
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        FormatMatrix {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
            format: self.format.clone(),
            wrong: self.wrong,
        }
    }

    /// Product of matrices whose inner formats agree.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.format.cols != rhs.format.rows {
            return Err(Error::DimensionMismatch(format!(
                "column format {} does not match row format {}",
                MatrixFormat::label_text(&self.format.cols),
                MatrixFormat::label_text(&rhs.format.rows)
            )));
        }
        let t = self.template();
        Ok(FormatMatrix {
            entries: linalg::mat_mul(&self.entries, &rhs.entries, &t),
            format: MatrixFormat::new(self.format.rows.clone(), rhs.format.cols.clone()),
            wrong: None,
        })
    }

    /// Copy with row `i` replaced; the wrong marker is given explicitly.
    pub fn replace_row(&self, i: usize, row: Vec<S>, wrong: Option<Line>) -> Self {
        let mut entries = self.entries.clone();
        entries[i] = row;
        FormatMatrix {
            entries,
            format: self.format.clone(),
            wrong,
        }
    }

    pub fn replace_col(&self, j: usize, col: Vec<S>, wrong: Option<Line>) -> Self {
        let mut entries = self.entries.clone();
        for (r, v) in entries.iter_mut().zip(col) {
            r[j] = v;
        }
        FormatMatrix {
            entries,
            format: self.format.clone(),
            wrong,
        }
    }

    /// Unit vector of length `n` with 1 at `k`.
    pub fn unit_vector(&self, n: usize, k: usize) -> Vec<S> {
        let t = self.template();
        (0..n)
            .map(|i| if i == k { t.one_like() } else { t.zero_like() })
            .collect()
    }

    /// Deletes row `i` and column `j`, shifting the wrong marker.
    pub fn delete(&self, i: usize, j: usize) -> Self {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let drop = |v: &[Parity], k: usize| -> Vec<Parity> {
            v.iter()
                .enumerate()
                .filter(|(x, _)| *x != k)
                .map(|(_, p)| *p)
                .collect()
        };
        let wrong = match self.wrong {
            Some(Line::Row(r)) if r == i => None,
            Some(Line::Row(r)) => Some(Line::Row(if r > i { r - 1 } else { r })),
            Some(Line::Col(c)) if c == j => None,
            Some(Line::Col(c)) => Some(Line::Col(if c > j { c - 1 } else { c })),
            None => None,
        };
        FormatMatrix {
            entries,
            format: MatrixFormat::new(drop(&self.format.rows, i), drop(&self.format.cols, j)),
            wrong,
        }
    }

    /// Elementary row operation `r_target → r_target + λ·r_source`.
    ///
    /// On a wrong matrix only correct lines may be added to the wrong line;
    /// the opposite direction changes the Berezinian and is rejected.
    pub fn add_row_multiple(&self, target: usize, source: usize, lambda: &S) -> Result<Self> {
        if target == source {
            return Err(Error::DimensionMismatch("source and target rows coincide".into()));
        }
        if self.wrong == Some(Line::Row(source)) {
            return Err(Error::IllegalWrongness(format!(
                "row {source} is wrong and cannot be added to row {target}"
            )));
        }
        let mut entries = self.entries.clone();
        let added: Vec<S> = self.entries[source].iter().map(|e| lambda.times(e)).collect();
        for (d, a) in entries[target].iter_mut().zip(added) {
            *d = d.plus(&a);
        }
        Ok(FormatMatrix {
            entries,
            format: self.format.clone(),
            wrong: self.wrong,
        })
    }

    /// Left multiplication of row `i` by `lambda`.
    pub fn scale_row(&self, i: usize, lambda: &S) -> Self {
        let mut entries = self.entries.clone();
        entries[i] = entries[i].iter().map(|e| lambda.times(e)).collect();
        FormatMatrix {
            entries,
            format: self.format.clone(),
            wrong: self.wrong,
        }
    }

    /// Entries rendered with a custom printer, one bracketed row per line.
    pub fn render(&self, entry: &dyn Fn(&S) -> String) -> String {
        let mut out = format!(
            "format rows={} cols={}",
            MatrixFormat::label_text(&self.format.rows),
            MatrixFormat::label_text(&self.format.cols)
        );
        match self.wrong {
            Some(Line::Row(i)) => out.push_str(&format!("\nwrong row {i}")),
            Some(Line::Col(j)) => out.push_str(&format!("\nwrong col {j}")),
            None => {}
        }
        out.push_str("\n[");
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push_str(",\n ");
            }
            let cells: Vec<String> = row.iter().map(entry).collect();
            out.push('[');
            out.push_str(&cells.join(", "));
            out.push(']');
        }
        out.push(']');
        out
    }
}

impl<S: Scalar> fmt::Display for FormatMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|e| e.to_string()))
    }
}

impl<S: Scalar> fmt::Debug for FormatMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormatMatrix({self})")
    }
}

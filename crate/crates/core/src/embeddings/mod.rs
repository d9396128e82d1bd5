//! Standard embeddings of the projective planes over the normed division
//! algebras, numerically and symbolically.

pub mod algebra;
pub mod golden;
pub mod height;
pub mod hermitian;
pub mod maurer_cartan;
pub mod survey;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symbolic::Polynomial;

/// A square matrix of 1-forms written as polynomials linear in
/// embedding-form components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormMatrix {
    entries: Vec<Vec<Polynomial>>,
}

impl FormMatrix {
    pub fn new(entries: Vec<Vec<Polynomial>>) -> Self {
        FormMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }
}

impl fmt::Display for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

//! Versioned JSON documents and a LaTeX emitter for matrices of forms.
//!
//! Polynomials and 1-forms are carried as the strings printed by `Display`,
//! which parse back with the kernel's text parser.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::embeddings::FormMatrix;
use crate::error::KernelError;
use crate::pipeline::SystemCounts;
use crate::symbolic::{ConnectionMatrix, Equation, EquationSystem, FormGenerator, OneForm, Polynomial, Rational};

pub const FORM_MATRIX_SCHEMA: &str = "tightframe/form-matrix/v1";
pub const CONNECTION_MATRIX_SCHEMA: &str = "tightframe/connection-matrix/v1";
pub const EQUATION_SYSTEM_SCHEMA: &str = "tightframe/equation-system/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormMatrixDoc {
    pub schema: String,
    pub k: usize,
    pub dim: usize,
    pub entries: FormMatrix,
}

impl FormMatrixDoc {
    pub fn new(k: usize, m: FormMatrix) -> Self {
        FormMatrixDoc { schema: FORM_MATRIX_SCHEMA.into(), k, dim: m.dim(), entries: m }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionMatrixDoc {
    pub schema: String,
    pub dim: usize,
    /// Number of basis forms, when the matrix is in a Darboux frame.
    pub n: Option<usize>,
    pub entries: Vec<Vec<OneForm>>,
}

impl ConnectionMatrixDoc {
    pub fn new(m: &ConnectionMatrix) -> Self {
        ConnectionMatrixDoc {
            schema: CONNECTION_MATRIX_SCHEMA.into(),
            dim: m.dim(),
            n: m.darboux_context().map(|c| c.n),
            entries: m.entries().to_vec(),
        }
    }

    pub fn from_entries(entries: Vec<Vec<OneForm>>, n: Option<usize>) -> Self {
        ConnectionMatrixDoc { schema: CONNECTION_MATRIX_SCHEMA.into(), dim: entries.len(), n, entries }
    }

    pub fn to_matrix(&self) -> Result<ConnectionMatrix, KernelError> {
        if let Some(n) = self.n {
            if n == 0 || n + 1 > self.dim {
                return Err(KernelError::DimensionMismatch(format!("{n} basis forms in a frame of {} vectors", self.dim)));
            }
        }
        let ctx = self.n.map(|n| crate::symbolic::DarbouxContext::new(n, self.dim - 1));
        ConnectionMatrix::from_entries(self.entries.clone(), ctx)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSystemDoc {
    pub schema: String,
    pub counts: SystemCounts,
    pub equations: Vec<Equation>,
}

impl EquationSystemDoc {
    pub fn new(sys: &EquationSystem) -> Self {
        EquationSystemDoc {
            schema: EQUATION_SYSTEM_SCHEMA.into(),
            counts: SystemCounts::of_system(sys),
            equations: sys.equations().to_vec(),
        }
    }
}

/// Checks the `schema` tag of a JSON document before decoding it.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str, schema: &str) -> Result<T, KernelError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| KernelError::Parse(format!("invalid JSON: {e}")))?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(s) if s == schema => {}
        other => return Err(KernelError::Parse(format!("expected schema {schema}, found {other:?}"))),
    }
    serde_json::from_value(value).map_err(|e| KernelError::Parse(e.to_string()))
}

const GREEK: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

/// `alpha_01` → `\alpha_{01}`, `b_1_0_2` → `b_{1,0}^{2}`, `omega_3_4` →
/// `\omega_{3,4}`.
fn latex_name(name: &str) -> String {
    let Some((head, rest)) = name.split_once('_') else {
        return name.to_string();
    };
    let head_tex = if GREEK.contains(&head) || head == "omega" { format!("\\{head}") } else { head.to_string() };
    let parts: Vec<&str> = rest.split('_').collect();
    if head == "b" && parts.len() == 3 {
        return format!("b_{{{},{}}}^{{{}}}", parts[0], parts[1], parts[2]);
    }
    format!("{head_tex}_{{{}}}", parts.join(","))
}

/// One signed term: `c·x` with `x` already in LaTeX.
fn latex_term(c: &Rational, x: &str, first: bool) -> String {
    let sign = if c.is_negative() {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let a = c.abs();
    let (num, den) = (a.numer().clone(), a.denom().clone());
    let body = if x.is_empty() {
        if den.is_one() {
            num.to_string()
        } else {
            format!("{{{num}\\over {den}}}")
        }
    } else {
        let top = if num.is_one() { x.to_string() } else { format!("{num}\\,{x}") };
        if den.is_one() {
            top
        } else {
            format!("{{{top}\\over {den}}}")
        }
    };
    if first {
        format!("{sign}{body}")
    } else {
        format!(" {sign} {body}")
    }
}

pub fn latex_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let x: Vec<String> = m
            .powers()
            .iter()
            .map(|(s, e)| if *e == 1 { latex_name(&s.to_string()) } else { format!("{}^{{{e}}}", latex_name(&s.to_string())) })
            .collect();
        out += &latex_term(c, &x.join(""), i == 0);
    }
    out
}

fn latex_generator(g: &FormGenerator) -> String {
    format!("\\omega_{{{},{}}}", g.row(), g.col())
}

pub fn latex_one_form(f: &OneForm) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (g, p)) in f.terms().enumerate() {
        match p.as_constant() {
            Some(c) => out += &latex_term(&c, &latex_generator(g), i == 0),
            None => {
                let sep = if i == 0 { "" } else { " + " };
                out += &format!("{sep}({})\\,{}", latex_polynomial(p), latex_generator(g));
            }
        }
    }
    out
}

fn latex_rows(rows: Vec<Vec<String>>) -> String {
    let mut out = String::from("\\pmatrix{\n");
    for row in rows {
        out += &row.join(" & ");
        out += " \\cr\n";
    }
    out += "}";
    out
}

/// `\pmatrix` layout with `{x \over 2}` fractions, as in the printed
/// matrices.
pub fn latex_form_matrix(m: &FormMatrix) -> String {
    latex_rows(m.entries().iter().map(|r| r.iter().map(latex_polynomial).collect()).collect())
}

pub fn latex_connection(entries: &[Vec<OneForm>]) -> String {
    latex_rows(entries.iter().map(|r| r.iter().map(latex_one_form).collect()).collect())
}

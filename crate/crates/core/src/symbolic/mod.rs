//! Exterior-calculus kernel: scalar symbols, polynomials, 1- and 2-forms,
//! the structure equations of a moving frame, and the equation solver.

pub mod connection;
pub mod equations;
pub mod form;
pub mod frame;
pub mod poly;
pub mod rewrite;
pub mod solve;
pub mod serial;
pub mod symbol;
pub mod text;

pub use connection::{ConnectionMatrix, DarbouxContext};
pub use equations::{collect, differentiate_relation, expand_relation, Equation, EquationSystem, Relation};
pub use form::{wedge, FormGenerator, OneForm, TwoForm, WedgePair};
pub use poly::{int, rat, Monomial, Polynomial, Rational};
pub use rewrite::RewriteSystem;
pub use solve::{solve_iterative, solve_linear, LinearSolver, Substitution};
pub use symbol::{ScalarSymbol, SymbolKind};
pub use text::{parse_one_form, parse_polynomial};
pub use frame::{apply_frame_change, FrameChange};

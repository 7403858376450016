//! Exact lattice algebra, based root data, metaplectic quadratic forms and
//! their sharp data, the Galois-coinvariant obstruction sequence, and local
//! symbols over `Q_p` and `F_q((t))`.

pub mod lattice;
pub mod root_datum;
pub mod form;
pub mod obstruction;
pub mod local_field;
pub mod checks;
pub mod document;
pub mod cli;

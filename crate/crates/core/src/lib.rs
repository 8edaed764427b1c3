//! Exact computation with composition algebras, symmetric composition
//! algebras, triality and the Freudenthal magic square.

pub mod scalars;
pub mod linalg;
pub mod quadforms;
pub mod algebra;
pub mod hurwitz;
pub mod symcomp;
pub mod triality;
pub mod magic_square;
pub mod io;

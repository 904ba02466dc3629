pub mod assemble;
pub mod encode;
pub mod graphs;
pub mod linsolve;
pub mod symmetry;

pub mod cli;
pub mod families;
pub mod graph;
pub mod io;
pub mod leighton;
pub mod permgroup;
pub mod polyhedra;
pub mod refine;
pub mod symres;

//! Finite simplicial complexes and posets with exact integer homology:
//! order complexes, face posets, joins, links, barycentric subdivision at
//! space and chain level, and Smith-normal-form homology.

pub mod chains;
pub mod complex;
pub mod gen;
pub mod homology;
pub mod poset;

pub use chains::{chain_join, Chain, IntegerChainComplex, SubdivisionOperator};
pub use complex::{
    boundary_of_simplex, complex_join, cycle_complex, discrete_points, full_simplex, octahedron,
    projective_plane_rp2, torus_7, ComplexJson, Simplex, SimplicialComplex,
};
pub use homology::{
    euler_characteristics, homology, homology_of_complex, homology_of_poset,
    is_homologically_spherical, is_spherical, is_unimodular, pi1_trivial,
    poset_is_homologically_spherical, HomologyGroup, HomologyResult, Verdict,
};
pub use poset::{face_poset, poset_join, FacePoset, FinitePoset, PosetJson};

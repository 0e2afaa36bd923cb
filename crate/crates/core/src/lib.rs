//! Regularity classification of modules.
//!
//! A module is *virtually regular* if every cyclic submodule is isomorphic
//! to a direct summand, *strongly virtually regular* if the same holds for
//! every finitely generated submodule, *completely virtually regular* if
//! every submodule is virtually regular, and *virtually semisimple* if every
//! submodule is isomorphic to a direct summand.
//!
//! This crate decides these predicates for
//!
//! - finitely generated abelian groups, from their invariant factors
//!   ([`abelian`]);
//! - finitely presented modules over valuation domains, from a symbolic
//!   Warfield form ([`valdom`]);
//!
//! and checks the abelian verdicts against a definition-level brute force on
//! concrete finite groups ([`oracle`], [`sweep`]). Presentations given as
//! integer relation matrices go through [`snf`].

pub mod abelian;
pub mod arith;
pub mod error;
pub mod input;
pub mod oracle;
pub mod report;
pub mod snf;
pub mod sweep;
pub mod valdom;

pub use abelian::{
    classify, invariant_factors_from_primary, is_summand_iso, is_vr_p_group,
    primary_decomposition, torsion_split_views, FgAbGroup, PrimaryData, RegularityVerdict,
};
pub use error::{Error, Result};
pub use input::{parse_module_spec, ModuleSpec};
pub use oracle::{subgroup_type, Caps, FiniteGroupInstance, Oracle, Subgroup};
pub use snf::{cokernel_structure, smith_normal_form, IntMatrix, SnfResult};
pub use sweep::{run_sweep, SweepOptions, SweepReport};
pub use valdom::{
    classify_cvr_val, classify_svr_val, classify_vr_val, render_table1, warfield_canonicalize,
    Annihilator, ValModule, ValuationRingProfile,
};

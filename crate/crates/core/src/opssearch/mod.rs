//! Candidate one-parameter subgroups, torus verdicts, destabilizer search and
//! VGIT walls.
//!
//! `ω(T, ·)` is a minimum of finitely many linear functions on the normalized
//! cone, so `ω - threshold` is concave and piecewise linear. Its sign over the
//! cone is attained on the rays of the cone refined by the hyperplanes where
//! two pieces tie; those rays are the candidates.

mod candidates;
mod search;
mod walls;

pub use candidates::{
    candidate_lambdas, candidate_lambdas_with, linear_pieces, refine_cone, undominated, CandidateRay, CandidateSet,
    CutHyperplane, Refinement,
};
pub use search::{
    destabilizer_search, seeded_transforms, torus_candidates, torus_verdict, tuple_verdict_from_members, Certificate,
    MemberVerdict, SearchOptions, SearchOutcome, Strategy, TorusEvaluator, TorusKind, TorusVerdict, TupleVerdict,
};
pub use walls::{
    constant_between_walls, scan_t, vgit_wall_hyperplanes, vgit_walls, vgit_walls_along, ScanPoint, Wall,
    WallHyperplane,
};

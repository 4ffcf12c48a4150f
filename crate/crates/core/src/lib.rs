pub mod autos;
pub mod cyclo;
pub mod geometry;
pub mod group;
pub mod intersection;
pub mod les;
pub mod linalg;
pub mod moebius;
pub mod multihomog;
pub mod perm;
pub mod report;
pub mod spec;

use super::diff::wirtinger_tower;
use super::field::ComplexField;
use super::spec::{DiskRegion, SobolevSpec};
use crate::error::Result;

/// Discrete `L^p` norm over the nodes strictly inside `region`.
pub fn lp_norm(field: &ComplexField, p: f64, region: &DiskRegion) -> f64 {
    let sum: f64 = field
        .iter_nodes()
        .filter(|(z, _)| region.contains(*z))
        .map(|(_, v)| {
            if p == 2.0 {
                v.norm_sqr()
            } else {
                v.norm().powf(p)
            }
        })
        .sum();
    (sum * field.spec().cell_area()).powf(1.0 / p)
}

/// Discrete `L^inf` norm over the nodes strictly inside `region`.
pub fn sup_norm_in(field: &ComplexField, region: &DiskRegion) -> f64 {
    field
        .iter_nodes()
        .filter(|(z, _)| region.contains(*z))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

/// `sum_{a+b<=k} || dz^a dzbar^b u ||_{L^p(region)}`.
///
/// The region must stay more than `k * spacing` inside the grid.
pub fn sobolev_norm(field: &ComplexField, spec: &SobolevSpec) -> Result<f64> {
    let h = field.spec().spacing();
    spec.region.check_inside(field.spec(), spec.k as f64 * h)?;
    let tower = wirtinger_tower(field, spec.k);
    Ok(tower
        .iter()
        .flatten()
        .map(|d| lp_norm(d, spec.p, &spec.region))
        .sum())
}

/// Sobolev norms for every order `0..=k` at once (entry `m` is the `W^{m,p}` norm).
pub fn sobolev_norms_upto(field: &ComplexField, k: usize, p: f64, region: &DiskRegion) -> Result<Vec<f64>> {
    // validates k and p
    SobolevSpec::new(k, p, *region)?;
    let h = field.spec().spacing();
    region.check_inside(field.spec(), k as f64 * h)?;
    let tower = wirtinger_tower(field, k);
    let mut acc = 0.0;
    Ok(tower
        .iter()
        .map(|level| {
            acc += level.iter().map(|d| lp_norm(d, p, region)).sum::<f64>();
            acc
        })
        .collect())
}

/// `sum_{a+b<=k} sup_region | dz^a dzbar^b u |`, the discrete `W^{k,inf}` norm.
pub fn sup_sobolev_norm(field: &ComplexField, k: usize, region: &DiskRegion) -> Result<f64> {
    let h = field.spec().spacing();
    region.check_inside(field.spec(), k as f64 * h)?;
    Ok(wirtinger_tower(field, k)
        .iter()
        .flatten()
        .map(|d| sup_norm_in(d, region))
        .sum())
}

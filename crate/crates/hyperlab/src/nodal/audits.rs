//! Courant nodal-domain and negative-Euler-characteristic audits for
//! computed small eigenfunctions.

use serde::Serialize;

use super::domains::NodalDecomposition;

#[derive(Clone, Debug, Serialize)]
pub struct CourantRow {
    /// Eigenvalue index (0 = constant mode).
    pub index: usize,
    pub lambda: f64,
    pub domains: usize,
    /// Courant bound `index + 1`.
    pub bound: usize,
    pub domains_within_bound: bool,
    pub all_chi_negative: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CourantOtalReport {
    pub rows: Vec<CourantRow>,
    pub all_pass: bool,
}

/// Audit nodal domain counts against the Courant bound and domain Euler
/// characteristics against the small-eigenvalue expectation (all negative).
/// Inputs are (eigenvalue index, eigenvalue, decomposition) triples; the
/// caller restricts to eigenfunctions with small eigenvalues.
pub fn courant_otal_audit(
    items: &[(usize, f64, &NodalDecomposition)],
) -> CourantOtalReport {
    let rows: Vec<CourantRow> = items
        .iter()
        .map(|&(index, lambda, dec)| {
            let bound = index + 1;
            let within = dec.domain_count <= bound;
            let negative = dec.domain_chi.iter().all(|&c| c < 0);
            CourantRow {
                index,
                lambda,
                domains: dec.domain_count,
                bound,
                domains_within_bound: within,
                all_chi_negative: negative,
                pass: within && negative,
            }
        })
        .collect();
    let all_pass = rows.iter().all(|r| r.pass);
    CourantOtalReport { rows, all_pass }
}

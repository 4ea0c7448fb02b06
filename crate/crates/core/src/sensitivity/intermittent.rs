use alloc::vec::Vec;

use crate::{Error, Mask, SetSystem};

/// Order of intermittent discontinuity of `f: (Y, T1) → (Y', T2)` at `x`, capped at
/// `max_order`; 0 when `f` is continuous at `x` or not intermittent there.
///
/// On finite topologies every point has a minimal open neighbourhood `U_x`. `f` is intermittent
/// at `x` if it is discontinuous there while continuous on all of `U_y` for some `y ∈ U_x`. Order
/// 1 additionally asks that no other point of `U_x` be intermittent; order `n > 1` asks for a
/// discontinuity at `x` and a point of order `n - 1` in `U_x \ {x}`.
pub fn intermittent_order(f: &[usize], t1: &SetSystem, t2: &SetSystem, x: usize, max_order: usize) -> Result<usize, Error> {
    let n = t1.universe();
    if f.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: f.len() });
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= t2.universe()) {
        return Err(Error::OutOfRange { index: bad, universe: t2.universe() });
    }
    if x >= n {
        return Err(Error::OutOfRange { index: x, universe: n });
    }
    if !t1.is_topology() || !t2.is_topology() {
        return Err(Error::NotATopology);
    }
    let nbhd: Vec<Mask> = (0..n).map(|z| t1.halo(z)).collect();
    let continuous: Vec<bool> = (0..n)
        .map(|z| {
            let target = t2.halo(f[z]);
            nbhd[z].iter().all(|w| target.contains(f[w]))
        })
        .collect();
    let calm: Vec<bool> = (0..n).map(|y| nbhd[y].iter().all(|w| continuous[w])).collect();
    let intermittent: Vec<bool> = (0..n).map(|z| !continuous[z] && nbhd[z].iter().any(|y| calm[y])).collect();
    // has[k][z]: z is intermittent of order k + 1
    let mut has: Vec<Vec<bool>> =
        alloc::vec![(0..n).map(|z| intermittent[z] && nbhd[z].iter().all(|w| w == z || !intermittent[w])).collect()];
    for k in 1..max_order {
        let prev = &has[k - 1];
        let next = (0..n).map(|z| !continuous[z] && nbhd[z].iter().any(|w| w != z && prev[w])).collect();
        has.push(next);
    }
    Ok((0..max_order).rev().find(|&k| has[k][x]).map_or(0, |k| k + 1))
}

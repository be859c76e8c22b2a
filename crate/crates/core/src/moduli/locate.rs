use num_traits::{One, Zero};

use super::faces::degenerate;
use crate::diagram::MetricStringDiagram;
use crate::error::Result;

/// Moves a point of a closed cell to the open cell containing it.
pub fn locate_cell(x: &MetricStringDiagram) -> Result<MetricStringDiagram> {
    x.check()?;
    let t_zero: Vec<Vec<bool>> = x
        .t
        .iter()
        .map(|ti| {
            // a circle with one coordinate has it equal to 1
            ti.iter().map(|v| v.is_zero() && ti.len() > 1).collect()
        })
        .collect();
    let p_end: Vec<Option<u8>> = x
        .p
        .iter()
        .map(|p| {
            if p.is_zero() {
                Some(0)
            } else if p.is_one() {
                Some(1)
            } else {
                None
            }
        })
        .collect();
    let (dtype, map) = degenerate(&x.dtype, &t_zero, &p_end);
    let t = map
        .t_src
        .iter()
        .enumerate()
        .map(|(i, src)| src.iter().map(|&j| x.t[i][j].clone()).collect())
        .collect();
    let p = map.p_src.iter().map(|&q| x.p[q].clone()).collect();
    Ok(MetricStringDiagram { dtype, t, p })
}

use crate::error::Result;
use crate::report::{BoundTable, Cell};

use super::chsh::chsh_upper_closed;

/// Externally computed SDP values for CHSH_{2^l}(2), l = 1..=5.
pub const SDP_REFERENCE: [f64; 5] = [0.853, 0.780, 0.743, 0.725, 0.716];

/// `1/p + (64/q)^{1/3}`, from the cubic-loss tradeoff.
pub fn chailloux_row(p: f64, q: f64) -> f64 {
    1.0 / p + (64.0 / q).cbrt()
}

/// `½ + 1/√q`.
pub fn fillinger_row(q: f64) -> f64 {
    0.5 + 1.0 / q.sqrt()
}

/// `½ + 1/√(2q)`.
pub fn shi_sikora_row(q: f64) -> f64 {
    0.5 + 1.0 / (2.0 * q).sqrt()
}

/// Comparison of CHSH_{2^l}(2) value bounds over `ls`.
pub fn prior_bounds_table(ls: &[u32]) -> Result<BoundTable> {
    let mut table = BoundTable::new(
        "table2",
        [
            "l",
            "q",
            "chailloux",
            "fillinger",
            "shi_sikora",
            "sdp_reference",
            "ours",
        ],
    )
    .param("p", 2)
    .note("sdp_reference: external numerical values, echoed verbatim; empty outside l=1..5");
    for &l in ls {
        let q = 2f64.powi(l as i32);
        let sdp = SDP_REFERENCE
            .get((l as usize).wrapping_sub(1))
            .map_or(Cell::Empty, |&v| Cell::Num(v));
        table.push(vec![
            Cell::Int(l as i64),
            Cell::Num(q),
            Cell::Num(chailloux_row(2.0, q)),
            Cell::Num(fillinger_row(q)),
            Cell::Num(shi_sikora_row(q)),
            sdp,
            Cell::Num(chsh_upper_closed(2.0, q)?),
        ]);
    }
    Ok(table)
}

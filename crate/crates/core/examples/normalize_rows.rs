//! Scale every SV row of a plot to [-1, 1] and map it back.

use dms_drift::normalize::{denormalize_grid, normalize_grid};
use dms_drift::prelude::*;

fn main() -> Result<(), Error> {
    let grid = Grid::from_rows(&[
        vec![2.0, 5.0, 11.0, 8.0],
        vec![-3.0, 0.0, 3.0, 1.5],
        vec![4.0, 4.0, 4.0, 4.0],
    ])?;
    let norm = normalize_grid(&grid);
    for (r, row) in norm.values.iter_rows().enumerate() {
        let s = &norm.stats;
        println!(
            "row {r}: min {:>5} max {:>5} degenerate {:<5} -> {:?}",
            s.row_min[r], s.row_max[r], s.degenerate[r], row
        );
    }
    let back = denormalize_grid(&norm.values, &norm.stats)?;
    let err = back.sub(&grid).max_abs();
    println!("max round-trip error {err:e}");
    Ok(())
}

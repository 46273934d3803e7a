//! Build the default 12 × 40 voltage grid and look up pixels by voltage.

use dms_drift::prelude::*;

fn main() -> Result<(), Error> {
    let axes = make_axes(-0.8, 5.0, 40, 350.0, 700.0, 12)?;
    let (rows, cols) = axes.shape();
    println!("{rows} SV rows x {cols} CV columns");

    let cv = axes.cv_values();
    let sv = axes.sv_values();
    println!("CV {:.3} .. {:.3} V (step {:.3})", cv[0], cv[cols - 1], cv[1] - cv[0]);
    println!("SV {:.3} .. {:.3} V (step {:.3})", sv[0], sv[rows - 1], sv[1] - sv[0]);

    for (r, c) in [(9, 39), (10, 13)] {
        println!("pixel ({r:>2}, {c:>2}) -> SV {:.3} V, CV {:.3} V", sv[r], cv[c]);
    }

    let def = axes.def();
    println!("{}", serde_json::to_string(&def).expect("axes serialize"));
    Ok(())
}

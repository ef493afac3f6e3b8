//! Regenerates the d=3 fixtures under `tests/fixtures`.
//!
//! The negative state is the first Haar-random pure state (seeds 0, 1, ...)
//! whose representation on the standard Wootters frame has a value below
//! `-0.01`.

use std::path::Path;

use qframe_core::frames::{renormalize, wootters_frame, Convention};
use qframe_core::io::{write_json, OperatorJson, PovmJson};
use qframe_core::operator_space::{random_povm, random_pure_state_with, random_state, seeded_rng, DensityOp, Povm};
use qframe_core::quasiprob::{negativity, rep_state};

const THRESHOLD: f64 = -0.01;

fn main() -> qframe_core::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let frame = renormalize(&wootters_frame(3)?, Convention::Standard)?;

    let (seed, state) = (0u64..)
        .map(|seed| (seed, random_pure_state_with(3, &mut seeded_rng(seed))))
        .find(|(_, rho)| {
            let rep = rep_state(&frame, rho).expect("dimensions agree").rep;
            negativity(&rep, frame.weights()).min_value < THRESHOLD
        })
        .expect("negative states are generic");
    println!("negative state found at seed {seed}");
    write_json(&root.join("negative_state_d3.json"), &OperatorJson::from_op(state.op()))?;

    write_json(&root.join("state_d3.json"), &OperatorJson::from_op(random_state(3, 11)?.op()))?;
    write_json(&root.join("povm_d3.json"), &PovmJson::from_povm(&random_povm(3, 4, 12)?))?;

    let classical = root.join("classical");
    std::fs::create_dir_all(classical.join("states")).map_err(|e| qframe_core::QframeError::Format(e.to_string()))?;
    std::fs::create_dir_all(classical.join("povms")).map_err(|e| qframe_core::QframeError::Format(e.to_string()))?;
    for k in 0..3 {
        let mut v = nalgebra::DVector::zeros(3);
        v[k] = num_complex::Complex64::new(1.0, 0.0);
        let rho = DensityOp::pure(&v)?;
        write_json(&classical.join(format!("states/basis_{k}.json")), &OperatorJson::from_op(rho.op()))?;
    }
    write_json(&classical.join("povms/z.json"), &PovmJson::from_povm(&Povm::computational(3)))?;
    Ok(())
}

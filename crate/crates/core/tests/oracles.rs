//! Values frozen from an independent adaptive-quadrature evaluation of the
//! radial integrals with closed-form packet transforms.

use adiabatic_kms::spectral::{
    adiabatic, adiabatic_classical, free_kms, pair, RadialQuadrature, TestPacket,
};
use adiabatic_kms::thermal::ThermalParams;
use adiabatic_kms::Complex64;

fn bench() -> (ThermalParams, TestPacket, TestPacket, RadialQuadrature) {
    let p = ThermalParams::new(1.0, 1.0, 1.0, 0.1).unwrap();
    let f = TestPacket::new(1.0, 0.5, 0.0, 1.0).unwrap();
    let g = TestPacket::new(1.0, 0.5, 0.5, 1.0).unwrap();
    let q = RadialQuadrature::for_packets(64, &f, &g).unwrap();
    (p, f, g, q)
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * b.norm()
}

#[test]
fn free_kms_bench_pairing() {
    let (p, f, g, q) = bench();
    let v = pair(&free_kms(&p), &f, &g, &q, 1e-9).unwrap().value;
    let oracle = Complex64::new(3.4469712327646875, 1.749874277784527);
    assert!(close(v, oracle, 1e-13), "{v}");
}

#[test]
fn adiabatic_bench_pairing() {
    let (p, f, g, q) = bench();
    let v = pair(&adiabatic(&p), &f, &g, &q, 1e-9).unwrap().value;
    let oracle = Complex64::new(2.9313680339288424, 1.5765191862221084);
    assert!(close(v, oracle, 1e-13), "{v}");
}

#[test]
fn classical_adiabatic_bench_pairing() {
    let (p, f, g, q) = bench();
    let v = pair(&adiabatic_classical(&p), &f, &g, &q, 1e-9)
        .unwrap()
        .value;
    let oracle = Complex64::new(2.990715210897094, 1.5765191862221084);
    assert!(close(v, oracle, 1e-13), "{v}");
}

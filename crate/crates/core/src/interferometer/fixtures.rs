//! Matrices and parameter tables of the published 5-, 7- and 9-mode chips.
//! Entries are printed to 3–4 decimals, so unitarity only holds to
//! [`FIXTURE_UNITARITY_TOL`].

use super::{Interferometer, OpticalElement};
use crate::numerics::{CMatrix, C64};
use std::f64::consts::PI;
use crate::{Error, Result};

pub const FIXTURE_UNITARITY_TOL: f64 = 5e-3;
pub const FIXTURE_NAMES: [&str; 5] = ["U5t", "U5r", "U7t", "U7r", "U9t"];

#[rustfmt::skip]
const U5T: [[(f64, f64); 5]; 5] = [
    [(0.212, 0.0), (-0.018, 0.165), (-0.238, -0.18), (-0.429, 0.32), (-0.715, 0.2)],
    [(-0.193, -0.388), (-0.045, -0.379), (0.19, 0.311), (0.328, -0.269), (-0.594, 0.03)],
    [(-0.723, 0.363), (0.087, -0.09), (-0.076, -0.155), (0.206, 0.443), (-0.153, -0.193)],
    [(-0.092, 0.045), (-0.148, -0.645), (-0.588, 0.184), (-0.369, -0.086), (0.167, 0.025)],
    [(0.318, -0.009), (-0.144, -0.594), (0.452, -0.405), (0.037, 0.387), (0.071, 0.025)],
];

#[rustfmt::skip]
const U5R: [[(f64, f64); 5]; 5] = [
    [(0.370, 0.0), (0.007, 0.151), (-0.164, -0.31), (-0.442, 0.138), (-0.702, 0.099)],
    [(-0.109, -0.465), (-0.013, -0.585), (0.121, 0.381), (0.076, -0.134), (-0.474, -0.147)],
    [(-0.677, 0.180), (0.134, -0.027), (-0.283, -0.133), (0.036, 0.498), (-0.206, -0.319)],
    [(-0.039, 0.240), (-0.080, -0.572), (-0.496, -0.046), (-0.475, -0.220), (0.265, 0.125)],
    [(0.262, 0.133), (0.090, -0.524), (0.479, -0.377), (0.055, 0.486), (0.143, 0.007)],
];

#[rustfmt::skip]
const U7T_RE: [[f64; 7]; 7] = [
    [0.4425, -0.1165, -0.1488, 0.4638, 0.1579, 0.0794, 0.0],
    [-0.1399, -0.4259, -0.1446, 0.0255, -0.0794, 0.1579, 0.0],
    [-0.0407, 0.0883, 0.5283, 0.2971, -0.1533, -0.0246, 0.1383],
    [0.6001, 0.3919, -0.205, -0.4029, -0.2782, -0.1281, 0.2082],
    [-0.1749, 0.0259, -0.2427, 0.1622, -0.1493, -0.2798, -0.0683],
    [-0.0259, -0.1749, 0.073, -0.1255, 0.2164, -0.3516, 0.1798],
    [0.0, 0.0, -0.0576, -0.2433, -0.4469, 0.1336, -0.5942],
];

#[rustfmt::skip]
const U7T_IM: [[f64; 7]; 7] = [
    [0.0, -0.271, -0.6244, 0.1661, -0.0794, 0.1579, 0.0],
    [0.5437, -0.5791, 0.2894, 0.0161, -0.1579, -0.0794, 0.0],
    [-0.253, -0.3246, -0.0445, -0.3622, -0.1533, -0.4588, 0.2082],
    [0.0265, -0.2588, 0.1053, -0.0722, -0.1775, -0.1004, -0.1383],
    [0.0259, 0.1749, -0.1019, 0.4779, -0.2428, -0.6334, -0.2194],
    [-0.1749, 0.0259, 0.1096, 0.1911, -0.6708, 0.2806, 0.3694],
    [0.0, 0.0, -0.2433, 0.0576, -0.0615, -0.0134, 0.548],
];

#[rustfmt::skip]
const U7R_RE: [[f64; 7]; 7] = [
    [0.4452, -0.1619, -0.0803, 0.3911, 0.1092, 0.0209, -0.0081],
    [-0.1373, -0.4556, -0.1317, 0.0791, -0.0755, 0.0837, 0.0001],
    [-0.0416, 0.0536, 0.4685, 0.3431, -0.1754, -0.055, 0.0912],
    [0.6524, 0.3148, -0.1802, -0.3467, -0.2841, -0.2602, 0.2024],
    [-0.1626, -0.0474, -0.2752, 0.1311, -0.1485, -0.2213, -0.0441],
    [-0.0704, -0.1444, 0.0106, -0.106, 0.3, -0.3859, 0.1749],
    [0.0001, -0.0067, -0.0768, -0.2394, -0.4011, 0.0415, -0.6603],
];

#[rustfmt::skip]
const U7R_IM: [[f64; 7]; 7] = [
    [0.0, -0.2345, -0.7213, 0.1138, 0.0039, 0.1245, 0.0016],
    [0.3705, -0.7084, 0.2681, -0.0592, -0.1077, -0.1061, 0.0001],
    [-0.4088, -0.1521, -0.0212, -0.3293, -0.2072, -0.4918, 0.179],
    [0.0715, -0.1923, 0.1248, -0.1292, -0.15, -0.1598, -0.1038],
    [0.0324, 0.154, -0.0879, 0.5484, -0.0376, -0.6209, -0.292],
    [-0.1169, 0.0211, 0.0282, 0.2579, -0.7122, 0.2034, 0.2517],
    [0.0, -0.007, -0.1605, 0.0906, -0.1107, -0.0338, 0.5391],
];

#[rustfmt::skip]
const U9T_RE: [[f64; 9]; 9] = [
    [0.1737, 0.3764, -0.2099, 0.0618, 0.156, 0.0832, 0.0, 0.0, 0.0],
    [0.2093, -0.1192, -0.193, 0.188, -0.1875, 0.0353, -0.1083, -0.0624, 0.0],
    [-0.3979, -0.2573, 0.1942, 0.2589, 0.1764, -0.0378, 0.0624, -0.1083, 0.0],
    [-0.0198, 0.1469, 0.3669, -0.1077, -0.2168, 0.4123, 0.1051, -0.2844, -0.146],
    [-0.0195, 0.3428, -0.5808, -0.2214, -0.0762, 0.2985, 0.319, -0.0395, 0.0997],
    [-0.0433, -0.1173, -0.0321, 0.0354, 0.2657, 0.2604, -0.2291, -0.535, 0.4547],
    [0.1173, -0.0433, -0.0772, -0.2149, 0.2085, -0.3808, 0.0738, 0.2366, 0.0849],
    [0.0, 0.0, -0.1216, 0.0289, 0.362, -0.3342, 0.5234, -0.4918, -0.0882],
    [0.0, 0.0, -0.0289, -0.1216, -0.0368, 0.1977, -0.0343, -0.1498, -0.6324],
];

#[rustfmt::skip]
const U9T_IM: [[f64; 9]; 9] = [
    [0.0, -0.6425, -0.3237, -0.4474, -0.0832, 0.156, 0.0, 0.0, 0.0],
    [0.7566, -0.2241, -0.0309, 0.4142, -0.0529, 0.0619, 0.0624, -0.1083, 0.0],
    [0.3374, -0.1194, 0.3813, -0.4619, 0.2872, 0.194, 0.1083, 0.0624, 0.0],
    [-0.1551, -0.1639, 0.0947, 0.2141, -0.0766, 0.2954, 0.5338, 0.0884, 0.0997],
    [0.1591, 0.3216, 0.2771, -0.1147, 0.186, 0.0874, 0.0228, 0.0695, 0.146],
    [-0.1173, 0.0433, -0.1696, 0.1752, 0.1475, 0.2771, -0.3511, 0.0202, 0.0303],
    [-0.0433, -0.1173, -0.0718, 0.2822, 0.4033, 0.3424, 0.1966, 0.495, -0.1054],
    [0.0, 0.0, 0.0289, 0.1216, -0.3066, -0.1135, 0.1344, -0.0901, -0.2633],
    [0.0, 0.0, -0.1216, 0.0289, 0.4462, 0.0092, -0.2397, -0.1164, -0.4843],
];

#[rustfmt::skip]
const PARAMETERS7: [[f64; 4]; 7] = [
    [1.5253, 0.6993, 2.7776, 1.8087],
    [2.6182, 1.5267, 2.956, 1.6449],
    [1.9217, 2.8131, 0.6705, 1.7497],
    [0.7217, 0.4718, 0.9392, 1.5706],
    [2.9256, 1.3138, 2.1079, 2.8032],
    [0.4974, 1.4759, 0.3152, 0.7684],
    [2.0089, 2.9217, 1.347, 2.025],
];

#[rustfmt::skip]
const PARAMETERS9: [[f64; 5]; 9] = [
    [2.6429, 2.306, 1.9381, 0.857, 1.5198],
    [2.6199, 0.5196, 0.8464, 2.9378, 2.4199],
    [0.4416, 2.8766, 2.4005, 2.7948, 0.2681],
    [2.6066, 0.6619, 3.0257, 2.1596, 1.8241],
    [2.9507, 0.5332, 0.274, 2.8834, 1.8991],
    [0.9698, 2.6471, 1.2586, 1.9846, 2.3428],
    [0.3772, 2.3326, 0.1867, 0.8455, 2.7346],
    [0.5191, 0.021, 0.3205, 1.3059, 0.771],
    [1.5579, 1.9952, 0.2173, 2.8286, 1.127],
];

/// One row of the 5-mode decomposition table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReckRow {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[rustfmt::skip]
const PARAMETERS5: [(f64, f64, f64); 10] = [
    (0.19, 0.0, 0.0), (0.40, 0.64, 0.0), (0.48, 0.0, 1.37), (0.44, 0.0, 1.10), (0.55, 2.21, 0.0),
    (0.54, 0.0, 1.02), (0.51, 2.93, 0.0), (0.76, 1.08, 0.0), (0.99, 2.58, 0.0), (0.95, 0.0, 0.0),
];

fn complex_pairs<const N: usize>(rows: &[[(f64, f64); N]; N]) -> CMatrix {
    CMatrix::from_fn(N, N, |i, j| C64::new(rows[i][j].0, rows[i][j].1))
}

fn split_parts<const N: usize>(re: &[[f64; N]; N], im: &[[f64; N]; N]) -> CMatrix {
    CMatrix::from_fn(N, N, |i, j| C64::new(re[i][j], im[i][j]))
}

/// Printed matrix by name (`U5t`, `U5r`, `U7t`, `U7r`, `U9t`).
pub fn load_fixture(name: &str) -> Result<CMatrix> {
    match name {
        "U5t" => Ok(complex_pairs(&U5T)),
        "U5r" => Ok(complex_pairs(&U5R)),
        "U7t" => Ok(split_parts(&U7T_RE, &U7T_IM)),
        "U7r" => Ok(split_parts(&U7R_RE, &U7R_IM)),
        "U9t" => Ok(split_parts(&U9T_RE, &U9T_IM)),
        other => Err(Error::InvalidInput(format!("unknown fixture {other:?}; known: {}", FIXTURE_NAMES.join(", ")))),
    }
}

/// Transmissivities and phases of the 5-mode chip, numbered 1..10.
pub fn parameters5() -> Vec<ReckRow> {
    PARAMETERS5.iter().map(|&(t, alpha, beta)| ReckRow { t, alpha, beta }).collect()
}

fn columns<const M: usize, const C: usize>(rows: &[[f64; C]; M]) -> Vec<Vec<f64>> {
    (0..C).map(|c| rows.iter().map(|r| r[c]).collect()).collect()
}

/// Interior phase columns of the 7-mode, 5-layer chip, `[column][mode]`.
pub fn parameters7() -> Vec<Vec<f64>> {
    columns(&PARAMETERS7)
}

/// Interior phase columns of the 9-mode, 6-layer chip, `[column][mode]`.
pub fn parameters9() -> Vec<Vec<f64>> {
    columns(&PARAMETERS9)
}

/// Beam-splitter angles of the heralded CZ gate, in degrees as printed.
pub const KNILL_THETA_DEG: f64 = 54.74;
pub const KNILL_PHI_DEG: f64 = 17.63;

/// Six-mode heralded CZ: qubit 1 on modes 1 (|0⟩) and 2 (|1⟩), ancillas
/// on modes 3 and 4 with one photon each, qubit 2 on modes 5 (|1⟩) and
/// 6 (|0⟩). Detecting one photon in each ancilla applies CZ with
/// probability 2/27. Angles in radians; the exact values are
/// `θ = arccos(1/√3)` and `φ = arccos(√((3+√6)/6))`.
pub fn knill_cz_chip(theta: f64, phi: f64) -> Interferometer {
    let elements = vec![
        OpticalElement::beam_splitter(2, 3, theta),
        OpticalElement::beam_splitter(4, 5, theta),
        OpticalElement::beam_splitter(3, 4, phi),
        OpticalElement::beam_splitter(2, 5, -theta),
        OpticalElement::phase_shifter(2, PI),
        OpticalElement::phase_shifter(5, PI),
    ];
    Interferometer { m: 6, elements }
}

//! Complex element weights: two-vector beamstate matrices, their port-level
//! form, and progressive-phase steering vectors.
//!
//! Weight phases are phase *delays*: the array factor uses
//! `exp(-j k r̂·rₙ)`, so a positive progressive step along `+x` tilts the
//! beam toward `+x` (positive θ in the `φ = 0` plane).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::ArrayLayout;

/// The unit excitation `k = 1∠0°`.
pub const K: Complex64 = Complex64::new(1.0, 0.0);

const TWO_VECTOR_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BeamState {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl BeamState {
    pub const ALL: [BeamState; 6] = [Self::A, Self::B, Self::C, Self::D, Self::E, Self::F];

    /// Cells of the 3×3 matrix in units of `k`, row-major, top-left first.
    fn signs(self) -> [[i8; 3]; 3] {
        match self {
            Self::A => [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
            Self::B => [[-1, 0, -1], [0, 0, 0], [1, 0, 1]],
            Self::C => [[-1, 0, 1], [0, 0, 0], [-1, 0, 1]],
            Self::D => [[0, 1, 0], [-1, 0, -1], [0, 1, 0]],
            Self::E => [[0, 1, 0], [1, 0, -1], [0, -1, 0]],
            Self::F => [[0, 1, 0], [-1, 0, 1], [0, -1, 0]],
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BeamState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::D => "D",
            Self::E => "E",
            Self::F => "F",
        })
    }
}

impl FromStr for BeamState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            "C" | "c" => Ok(Self::C),
            "D" | "d" => Ok(Self::D),
            "E" | "e" => Ok(Self::E),
            "F" | "f" => Ok(Self::F),
            other => domain(format!("unknown beamstate label {other:?} (expected A-F)")),
        }
    }
}

/// Zero-based matrix cell. Displayed one-based, `(row,col)`, matching the
/// printed matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col + 1)
    }
}

/// A rows × cols grid of complex weights, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExcitationMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Complex64>,
}

impl ExcitationMatrix {
    pub fn new(rows: usize, cols: usize, cells: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || cells.len() != rows * cols {
            return domain(format!(
                "excitation matrix {rows}x{cols} needs {} cells, got {}",
                rows * cols,
                cells.len()
            ));
        }
        Ok(Self { rows, cols, cells })
    }

    /// Build from integer multiples of `k` (`1`, `-1`, `0`).
    pub fn from_signs<const R: usize, const C: usize>(signs: [[i8; C]; R]) -> Self {
        let cells = signs.iter().flatten().map(|&s| K * f64::from(s)).collect();
        Self { rows: R, cols: C, cells }
    }

    pub fn beamstate(state: BeamState) -> Self {
        Self::from_signs(state.signs())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, cell: Cell) -> Complex64 {
        self.cells[cell.row * self.cols + cell.col]
    }

    /// Row-major cells, which is also the element order of a planar layout.
    pub fn cells(&self) -> &[Complex64] {
        &self.cells
    }

    pub fn transpose(&self) -> Self {
        let cells = (0..self.cols)
            .flat_map(|r| (0..self.rows).map(move |c| (r, c)))
            .map(|(r, c)| self.cells[c * self.cols + r])
            .collect();
        Self { rows: self.cols, cols: self.rows, cells }
    }

    pub fn cell_sum(&self) -> Complex64 {
        self.cells.iter().sum()
    }

    /// Accepts iff every cell is `k`, `-k` or `0`.
    pub fn validate_two_vector(&self) -> TwoVectorVerdict {
        validate_two_vector(&self.cells, self.cols)
    }

    pub fn negated(&self) -> Self {
        Self { cells: self.cells.iter().map(|w| -w).collect(), ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TwoVectorVerdict {
    Accept,
    Reject { cell: Cell, value: Complex64 },
}

impl TwoVectorVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Self::Accept)
    }
}

/// Two-vector check over a flat weight list laid out `cols` per row.
pub fn validate_two_vector(weights: &[Complex64], cols: usize) -> TwoVectorVerdict {
    let allowed = [K, -K, Complex64::new(0.0, 0.0)];
    for (i, w) in weights.iter().enumerate() {
        if !allowed.iter().any(|a| (w - a).norm() <= TWO_VECTOR_TOL) {
            return TwoVectorVerdict::Reject {
                cell: Cell::new(i / cols.max(1), i % cols.max(1)),
                value: *w,
            };
        }
    }
    TwoVectorVerdict::Accept
}

/// Table 1: port (row, 1-9) × state (column, A-F) in units of `k`.
pub const TABLE1: [[i8; 6]; 9] = [
    [1, 1, 1, 0, 0, 0],
    [1, 0, 0, 1, -1, -1],
    [1, 1, -1, 0, 0, 0],
    [1, 0, 0, -1, -1, 1],
    [1, -1, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [1, 0, 0, 1, 1, 1],
    [1, 0, 0, -1, 1, -1],
    [1, -1, -1, 0, 0, 0],
];

/// Table 1 column for `state` as complex port weights, ports 1..=9.
pub fn table1_column(state: BeamState) -> Vec<Complex64> {
    TABLE1.iter().map(|row| K * f64::from(row[state.index()])).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingKind {
    #[default]
    Table1Reconciled,
    MatrixRowMajor,
}

impl MappingKind {
    pub fn mapping(self) -> Result<PortMapping> {
        match self {
            Self::Table1Reconciled => reconcile_table_mapping(),
            Self::MatrixRowMajor => PortMapping::row_major(3, 3),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Table1Reconciled => "table1-reconciled",
            Self::MatrixRowMajor => "matrix-row-major",
        }
    }
}

impl FromStr for MappingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1-reconciled" => Ok(Self::Table1Reconciled),
            "matrix-row-major" => Ok(Self::MatrixRowMajor),
            other => domain(format!(
                "unknown mapping {other:?} (expected table1-reconciled or matrix-row-major)"
            )),
        }
    }
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bijection from port numbers `1..=rows*cols` to matrix cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortMapping {
    rows: usize,
    cols: usize,
    /// `cells[p - 1]` is the cell driven by port `p`.
    cells: Vec<Cell>,
}

impl PortMapping {
    pub fn new(rows: usize, cols: usize, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != rows * cols {
            return domain(format!(
                "port mapping for {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                cells.len()
            ));
        }
        let mut seen = vec![false; rows * cols];
        for c in &cells {
            if c.row >= rows || c.col >= cols {
                return domain(format!("cell {c} outside a {rows}x{cols} matrix"));
            }
            let slot = &mut seen[c.row * cols + c.col];
            if *slot {
                return domain(format!("cell {c} assigned to more than one port"));
            }
            *slot = true;
        }
        Ok(Self { rows, cols, cells })
    }

    /// Port `p` drives the `p`-th cell in row-major order.
    pub fn row_major(rows: usize, cols: usize) -> Result<Self> {
        let cells = (0..rows).flat_map(|r| (0..cols).map(move |c| Cell::new(r, c))).collect();
        Self::new(rows, cols, cells)
    }

    pub fn port_count(&self) -> usize {
        self.cells.len()
    }

    /// Cell driven by 1-based `port`.
    pub fn cell(&self, port: usize) -> Option<Cell> {
        port.checked_sub(1).and_then(|i| self.cells.get(i).copied())
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
}

/// Matrix cells reordered by port number.
pub fn port_vector(m: &ExcitationMatrix, mapping: &PortMapping) -> Result<Vec<Complex64>> {
    if (m.rows, m.cols) != (mapping.rows, mapping.cols) {
        return domain(format!(
            "mapping is for {}x{} but matrix is {}x{}",
            mapping.rows, mapping.cols, m.rows, m.cols
        ));
    }
    Ok(mapping.cells.iter().map(|&c| m.get(c)).collect())
}

/// The unique port → cell bijection under which every beamstate matrix
/// reproduces its Table 1 column.
///
/// Each port is restricted to the cells whose six-state signature matches
/// its Table 1 row, and the search then enumerates *all* complete
/// assignments; anything other than exactly one is reported as an error.
pub fn reconcile_table_mapping() -> Result<PortMapping> {
    let matrices: Vec<ExcitationMatrix> =
        BeamState::ALL.iter().map(|&s| ExcitationMatrix::beamstate(s)).collect();
    let all_cells: Vec<Cell> =
        (0..3).flat_map(|r| (0..3).map(move |c| Cell::new(r, c))).collect();

    let candidates: Vec<Vec<usize>> = TABLE1
        .iter()
        .map(|row| {
            all_cells
                .iter()
                .enumerate()
                .filter(|(_, &cell)| {
                    matrices.iter().zip(row).all(|(m, &s)| m.get(cell) == K * f64::from(s))
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut solutions = Vec::new();
    let mut current = Vec::with_capacity(9);
    search(&candidates, 0, &mut [false; 9], &mut current, &mut solutions);

    match solutions.len() {
        1 => {
            let cells = solutions[0].iter().map(|&i| all_cells[i]).collect();
            PortMapping::new(3, 3, cells)
        }
        0 => Err(Error::Mapping("no port/cell bijection reproduces Table 1".into())),
        n => Err(Error::Mapping(format!(
            "{n} port/cell bijections reproduce Table 1; expected exactly one"
        ))),
    }
}

fn search(
    candidates: &[Vec<usize>],
    port: usize,
    used: &mut [bool; 9],
    current: &mut Vec<usize>,
    solutions: &mut Vec<Vec<usize>>,
) {
    if port == candidates.len() {
        solutions.push(current.clone());
        return;
    }
    for &c in &candidates[port] {
        if !used[c] {
            used[c] = true;
            current.push(c);
            search(candidates, port + 1, used, current, solutions);
            current.pop();
            used[c] = false;
        }
    }
}

/// Unit-magnitude weights with phase `n · dphi_deg` for element `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringVector {
    pub weights: Vec<Complex64>,
    pub dphi_deg: f64,
}

impl SteeringVector {
    /// Element phases in degrees, reduced to `[0, 360)`.
    pub fn phases_deg(&self) -> Vec<f64> {
        (0..self.weights.len()).map(|n| progressive_phase_deg(n, self.dphi_deg)).collect()
    }
}

fn progressive_phase_deg(n: usize, dphi_deg: f64) -> f64 {
    (n as f64 * dphi_deg).rem_euclid(360.0)
}

fn unit_phasor_deg(deg: f64) -> Complex64 {
    Complex64::from_polar(1.0, deg.to_radians())
}

pub fn progressive_phase(n: usize, dphi_deg: f64) -> Result<SteeringVector> {
    if n == 0 {
        return domain("progressive phase needs at least one element");
    }
    if !dphi_deg.is_finite() {
        return domain(format!("phase step must be finite, got {dphi_deg}"));
    }
    let weights = (0..n).map(|i| unit_phasor_deg(progressive_phase_deg(i, dphi_deg))).collect();
    Ok(SteeringVector { weights, dphi_deg })
}

/// Progressive step (degrees) that points a row with pitch `spacing_wl` at
/// `theta0_deg` off broadside: `360° · d/λ · sin θ₀`.
pub fn steering_for_angle(theta0_deg: f64, spacing_wl: f64) -> Result<f64> {
    if !(theta0_deg.abs() < 90.0) {
        return domain(format!("steer angle must be within (-90, 90) degrees, got {theta0_deg}"));
    }
    if !(spacing_wl > 0.0) || !spacing_wl.is_finite() {
        return domain(format!("spacing must be positive, got {spacing_wl}"));
    }
    Ok(360.0 * spacing_wl * theta0_deg.to_radians().sin())
}

/// How an array is driven.
#[derive(Clone, Debug, PartialEq)]
pub enum Excitation {
    Beamstate(BeamState),
    Matrix(ExcitationMatrix),
    /// Phase step along the rows (the x-axis); every row gets the same ramp.
    Progressive { dphi_deg: f64 },
    /// One weight per element, in layout order.
    Custom(Vec<Complex64>),
}

impl Excitation {
    pub fn weights(&self, layout: &ArrayLayout) -> Result<Vec<Complex64>> {
        match self {
            Self::Beamstate(s) => matrix_weights(&ExcitationMatrix::beamstate(*s), layout),
            Self::Matrix(m) => matrix_weights(m, layout),
            Self::Progressive { dphi_deg } => {
                let ramp = progressive_phase(layout.cols(), *dphi_deg)?;
                Ok((0..layout.len()).map(|i| ramp.weights[layout.column_of(i)]).collect())
            }
            Self::Custom(w) => {
                if w.len() != layout.len() {
                    return domain(format!(
                        "{} custom weights for a {}-element layout",
                        w.len(),
                        layout.len()
                    ));
                }
                Ok(w.clone())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Beamstate(s) => format!("beamstate {s}"),
            Self::Matrix(m) => format!("matrix {}x{}", m.rows, m.cols),
            Self::Progressive { dphi_deg } => format!("progressive {dphi_deg} deg"),
            Self::Custom(w) => format!("custom ({} weights)", w.len()),
        }
    }
}

fn matrix_weights(m: &ExcitationMatrix, layout: &ArrayLayout) -> Result<Vec<Complex64>> {
    if (m.rows, m.cols) != (layout.rows(), layout.cols()) {
        return domain(format!(
            "{}x{} excitation matrix does not fit a {}x{} layout",
            m.rows,
            m.cols,
            layout.rows(),
            layout.cols()
        ));
    }
    Ok(m.cells.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(state: BeamState) -> ExcitationMatrix {
        ExcitationMatrix::beamstate(state)
    }

    #[test]
    fn printed_matrices() {
        assert!(m(BeamState::A).cells().iter().all(|&w| w == K));
        assert_eq!(m(BeamState::B), ExcitationMatrix::from_signs([[-1, 0, -1], [0, 0, 0], [1, 0, 1]]));
        assert_eq!(m(BeamState::D), ExcitationMatrix::from_signs([[0, 1, 0], [-1, 0, -1], [0, 1, 0]]));
        assert!("G".parse::<BeamState>().is_err());
        assert_eq!("e".parse::<BeamState>().unwrap(), BeamState::E);
    }

    #[test]
    fn transpose_relations() {
        assert_eq!(m(BeamState::B).transpose(), m(BeamState::C));
        assert_eq!(m(BeamState::A).transpose(), m(BeamState::A));
        assert_eq!(m(BeamState::D).transpose().transpose(), m(BeamState::D));
        let rect = ExcitationMatrix::from_signs([[1, 0, -1, 1], [0, 0, 1, -1]]);
        let t = rect.transpose();
        assert_eq!((t.rows(), t.cols()), (4, 2));
        assert_eq!(t.get(Cell::new(2, 1)), rect.get(Cell::new(1, 2)));
    }

    #[test]
    fn cell_sums() {
        assert_eq!(m(BeamState::A).cell_sum(), 9.0 * K);
        for s in &BeamState::ALL[1..] {
            assert_eq!(m(*s).cell_sum(), Complex64::new(0.0, 0.0), "{s}");
        }
    }

    #[test]
    fn two_vector_validation() {
        for s in BeamState::ALL {
            assert!(m(s).validate_two_vector().is_accept());
        }
        let mut cells = m(BeamState::A).cells().to_vec();
        cells[4] = 0.5 * K;
        let bad = ExcitationMatrix::new(3, 3, cells).unwrap();
        assert_eq!(
            bad.validate_two_vector(),
            TwoVectorVerdict::Reject { cell: Cell::new(1, 1), value: 0.5 * K }
        );
        let zero = ExcitationMatrix::new(3, 3, vec![Complex64::new(0.0, 0.0); 9]).unwrap();
        assert!(zero.validate_two_vector().is_accept());
        // 1∠180° computed from polar form is accepted as -k
        let polar = ExcitationMatrix::new(1, 1, vec![Complex64::from_polar(1.0, std::f64::consts::PI)]).unwrap();
        assert!(polar.validate_two_vector().is_accept());
    }

    #[test]
    fn reconciled_mapping_matches_table() {
        let map = reconcile_table_mapping().unwrap();
        let expected = [
            (9, (1, 1)),
            (5, (1, 3)),
            (3, (3, 1)),
            (1, (3, 3)),
            (7, (1, 2)),
            (8, (2, 1)),
            (4, (2, 3)),
            (2, (3, 2)),
            (6, (2, 2)),
        ];
        for (port, (r, c)) in expected {
            assert_eq!(map.cell(port), Some(Cell::new(r - 1, c - 1)), "port {port}");
        }
        for s in BeamState::ALL {
            assert_eq!(port_vector(&m(s), &map).unwrap(), table1_column(s), "state {s}");
        }
    }

    #[test]
    fn table1_port_columns() {
        let map = reconcile_table_mapping().unwrap();
        let signs = |v: Vec<Complex64>| v.iter().map(|w| w.re as i8).collect::<Vec<_>>();
        assert_eq!(signs(port_vector(&m(BeamState::B), &map).unwrap()), [1, 0, 1, 0, -1, 0, 0, 0, -1]);
        assert_eq!(signs(port_vector(&m(BeamState::D), &map).unwrap()), [0, 1, 0, -1, 0, 0, 1, -1, 0]);
        let c = signs(port_vector(&m(BeamState::C), &map).unwrap());
        assert_eq!([c[0], c[2], c[4], c[8]], [1, -1, 1, -1]);
        let f = signs(port_vector(&m(BeamState::F), &map).unwrap());
        assert_eq!([f[1], f[3], f[6], f[7]], [-1, 1, 1, -1]);
        let row_major = PortMapping::row_major(3, 3).unwrap();
        assert!(port_vector(&m(BeamState::A), &row_major).unwrap().iter().all(|&w| w == K));
    }

    #[test]
    fn mapping_validation() {
        assert!(PortMapping::new(3, 3, vec![Cell::new(0, 0); 9]).is_err());
        assert!(PortMapping::new(3, 3, vec![Cell::new(0, 0)]).is_err());
        let map = PortMapping::row_major(3, 3).unwrap();
        assert_eq!(map.cell(0), None);
        assert_eq!(map.cell(10), None);
        let four = PortMapping::row_major(4, 4).unwrap();
        assert!(port_vector(&m(BeamState::A), &four).is_err());
        assert_eq!("matrix-row-major".parse::<MappingKind>().unwrap(), MappingKind::MatrixRowMajor);
        assert!("row-major".parse::<MappingKind>().is_err());
    }

    #[test]
    fn progressive_phases() {
        let v = progressive_phase(5, 30.0).unwrap();
        assert_eq!(v.phases_deg(), vec![0.0, 30.0, 60.0, 90.0, 120.0]);
        assert!(v.weights.iter().all(|w| (w.norm() - 1.0).abs() < 1e-15));
        let flat = progressive_phase(5, 0.0).unwrap();
        assert!(flat.weights.iter().all(|&w| w == K));
        let p = progressive_phase(5, 108.0).unwrap().phases_deg();
        for (a, b) in p.iter().zip([0.0, 108.0, 216.0, 324.0, 72.0]) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(progressive_phase(0, 30.0).is_err());
    }

    #[test]
    fn steering_step() {
        assert!((steering_for_angle(30.0, 0.6).unwrap() - 108.0).abs() < 1e-9);
        assert_eq!(steering_for_angle(0.0, 0.37).unwrap(), 0.0);
        assert!((steering_for_angle(7.98, 0.6).unwrap() - 30.0).abs() < 0.05);
        assert!(steering_for_angle(90.0, 0.6).is_err());
        assert!(steering_for_angle(-95.0, 0.6).is_err());
        assert!(steering_for_angle(10.0, 0.0).is_err());
    }

    #[test]
    fn excitation_weights_follow_layout() {
        let planar = ArrayLayout::planar(3, 3, 0.5, 14e9).unwrap();
        let w = Excitation::Progressive { dphi_deg: 90.0 }.weights(&planar).unwrap();
        assert_eq!(w[0], w[3]);
        assert!((w[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let lin = ArrayLayout::linear(5, 0.6, 14e9).unwrap();
        assert!(Excitation::Beamstate(BeamState::A).weights(&lin).is_err());
        assert!(Excitation::Custom(vec![K; 4]).weights(&lin).is_err());
        assert_eq!(Excitation::Custom(vec![K; 5]).weights(&lin).unwrap().len(), 5);
    }
}

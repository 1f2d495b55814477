use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Xk,
    R2,
    R3,
    R4,
    JSection,
    Fsigma,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quantity::Xk => "Xk",
            Quantity::R2 => "R2",
            Quantity::R3 => "R3",
            Quantity::R4 => "R4",
            Quantity::JSection => "Jsection",
            Quantity::Fsigma => "Fsigma",
        };
        f.write_str(s)
    }
}

/// One measured value, keyed the way it is written to CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct NormRow {
    pub trajectory_id: usize,
    pub k: Option<u32>,
    pub quantity: Quantity,
    pub direction: Option<String>,
    pub value: f64,
}

impl NormRow {
    pub fn new(trajectory_id: usize, k: Option<u32>, quantity: Quantity, direction: Option<String>, value: f64) -> Self {
        Self {
            trajectory_id,
            k,
            quantity,
            direction,
            value,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormReport {
    pub rows: Vec<NormRow>,
}

impl NormReport {
    pub fn of(&self, quantity: Quantity) -> impl Iterator<Item = &NormRow> {
        self.rows.iter().filter(move |r| r.quantity == quantity)
    }
}

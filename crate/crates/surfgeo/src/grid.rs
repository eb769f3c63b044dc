//! Cartesian sampling grids over the closed parameter disc.
//!
//! An `N×N` node grid spans the bounding square `[−ρ, ρ]²`; nodes outside the
//! disc of radius ρ are masked off. Node coordinates are computed as
//! `ρ·(2i/(N−1) − 1)` so the extreme nodes land on ±ρ exactly and, for odd N,
//! the center node is exactly (0, 0). Iteration order is row-major with v as
//! the row coordinate (v ascends over rows, u ascends within a row), and all
//! consumers preserve that order, which is what makes grid-derived reports
//! reproducible byte-for-byte.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct DiscGrid {
    pub size: usize,
    pub radius: f64,
}

/// One in-disc grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub iu: usize,
    pub iv: usize,
    pub u: f64,
    pub v: f64,
}

impl DiscGrid {
    /// A grid for verdict-producing scans: size must be odd (so the center
    /// point is a node) and at least 9.
    pub fn new(size: usize, radius: f64) -> Result<DiscGrid> {
        if size < 9 || size.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "grid size must be odd and at least 9, got {size}"
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Config(format!("grid radius must be positive, got {radius}")));
        }
        Ok(DiscGrid { size, radius })
    }

    /// Node coordinate along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        self.radius * (2.0 * i as f64 / (self.size - 1) as f64 - 1.0)
    }

    /// Spacing between adjacent nodes.
    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / (self.size - 1) as f64
    }

    /// Membership in the closed disc, with relative slack for boundary nodes.
    pub fn in_disc(&self, u: f64, v: f64) -> bool {
        u * u + v * v <= self.radius * self.radius * (1.0 + crate::tol::EPS_DOMAIN)
    }

    /// Index pair of the center node (size is odd by construction).
    pub fn center(&self) -> (usize, usize) {
        ((self.size - 1) / 2, (self.size - 1) / 2)
    }

    /// All in-disc nodes in row-major order.
    pub fn nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for iv in 0..self.size {
            let v = self.coord(iv);
            for iu in 0..self.size {
                let u = self.coord(iu);
                if self.in_disc(u, v) {
                    out.push(Node { iu, iv, u, v });
                }
            }
        }
        out
    }

    /// Centers of the (N−1)² cells whose centers lie in the disc, row-major.
    /// Used for midpoint-rule quadrature; each cell has area spacing².
    pub fn cell_centers(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for iv in 0..self.size - 1 {
            let v = 0.5 * (self.coord(iv) + self.coord(iv + 1));
            for iu in 0..self.size - 1 {
                let u = 0.5 * (self.coord(iu) + self.coord(iu + 1));
                if self.in_disc(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

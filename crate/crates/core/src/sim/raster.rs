//! Orthographic silhouettes: every face is projected along −z onto the
//! plane z = 0 and rasterised with pixel-centre sampling.

use crate::geom2d::P2;
use crate::mesh::TriMesh;

use super::SimError;

/// A binary raster in physical units. Pixel `(col, row)` covers
/// `origin + [col, col+1) × [row, row+1)` pixel sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct Silhouette {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
    pixel_size: f64,
    origin: P2,
}

impl Silhouette {
    pub fn from_grid(
        width: usize,
        height: usize,
        pixels: Vec<bool>,
        pixel_size: f64,
        origin: P2,
    ) -> Result<Self, SimError> {
        if !(pixel_size > 0.0) || !pixel_size.is_finite() {
            return Err(SimError::Domain(format!("pixel size must be positive, got {pixel_size}")));
        }
        if pixels.len() != width * height {
            return Err(SimError::Domain(format!("raster has {} cells, expected {width}×{height}", pixels.len())));
        }
        Ok(Self { width, height, pixels, pixel_size, origin })
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn pixel_size(&self) -> f64 {
        self.pixel_size
    }
    pub fn origin(&self) -> P2 {
        self.origin
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.pixels[row * self.width + col]
    }

    pub fn count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.pixels.iter().any(|&p| p)
    }

    /// Outer corners of the leftmost and rightmost set pixel in every row.
    /// Their convex hull equals the hull of all set pixel squares.
    pub fn boundary_corners(&self) -> Vec<P2> {
        let s = self.pixel_size;
        let mut out = Vec::new();
        for row in 0..self.height {
            let line = &self.pixels[row * self.width..(row + 1) * self.width];
            let (Some(first), Some(last)) = (line.iter().position(|&p| p), line.iter().rposition(|&p| p)) else {
                continue;
            };
            let y0 = self.origin.y + row as f64 * s;
            let y1 = y0 + s;
            let x0 = self.origin.x + first as f64 * s;
            let x1 = self.origin.x + (last + 1) as f64 * s;
            out.extend([P2::new(x0, y0), P2::new(x0, y1), P2::new(x1, y0), P2::new(x1, y1)]);
        }
        out
    }
}

/// (count of set pixels) × pixel_size².
pub fn silhouette_area(s: &Silhouette) -> f64 {
    s.count() as f64 * s.pixel_size * s.pixel_size
}

/// Projects all faces of `mesh` onto z = 0 and sets each pixel whose centre
/// lies inside (or on the edge of) some projected triangle. The grid is
/// aligned to integer multiples of `pixel_size` in world coordinates.
pub fn project_silhouette(mesh: &TriMesh, pixel_size: f64) -> Result<Silhouette, SimError> {
    if !(pixel_size > 0.0) || !pixel_size.is_finite() {
        return Err(SimError::Domain(format!("pixel size must be positive, got {pixel_size}")));
    }
    let (lo, hi) = mesh.bounding_box();
    if mesh.vertices().is_empty() || !lo.x.is_finite() {
        return Err(SimError::DegenerateSilhouette);
    }
    let s = pixel_size;
    let col0 = (lo.x / s).floor();
    let row0 = (lo.y / s).floor();
    let origin = P2::new(col0 * s, row0 * s);
    let width = ((hi.x / s).floor() - col0) as usize + 1;
    let height = ((hi.y / s).floor() - row0) as usize + 1;
    let mut pixels = vec![false; width * height];

    for [a, b, c] in mesh.triangles() {
        // local pixel units: centre of (col,row) sits at (col+0.5,row+0.5)
        let pa = ((a.x - origin.x) / s, (a.y - origin.y) / s);
        let pb = ((b.x - origin.x) / s, (b.y - origin.y) / s);
        let pc = ((c.x - origin.x) / s, (c.y - origin.y) / s);
        let area2 = (pb.0 - pa.0) * (pc.1 - pa.1) - (pb.1 - pa.1) * (pc.0 - pa.0);
        if area2 == 0.0 {
            continue;
        }
        let ymin = pa.1.min(pb.1).min(pc.1);
        let ymax = pa.1.max(pb.1).max(pc.1);
        let r_lo = (ymin - 0.5).ceil().max(0.0) as usize;
        let r_hi = ((ymax - 0.5).floor() as isize).min(height as isize - 1);
        if r_hi < r_lo as isize {
            continue;
        }
        let edges = [(pa, pb), (pb, pc), (pc, pa)];
        for row in r_lo..=r_hi as usize {
            let y = row as f64 + 0.5;
            let mut xl = f64::INFINITY;
            let mut xr = f64::NEG_INFINITY;
            for &(p, q) in &edges {
                let (y0, y1) = if p.1 <= q.1 { (p.1, q.1) } else { (q.1, p.1) };
                if y < y0 || y > y1 {
                    continue;
                }
                if p.1 == q.1 {
                    xl = xl.min(p.0.min(q.0));
                    xr = xr.max(p.0.max(q.0));
                } else {
                    let x = p.0 + (y - p.1) * (q.0 - p.0) / (q.1 - p.1);
                    xl = xl.min(x);
                    xr = xr.max(x);
                }
            }
            if xl > xr {
                continue;
            }
            let c_lo = (xl - 0.5).ceil().max(0.0) as usize;
            let c_hi = ((xr - 0.5).floor() as isize).min(width as isize - 1);
            if c_hi < c_lo as isize {
                continue;
            }
            let base = row * width;
            pixels[base + c_lo..=base + c_hi as usize].iter_mut().for_each(|p| *p = true);
        }
    }

    let sil = Silhouette { width, height, pixels, pixel_size, origin };
    if sil.is_empty() {
        return Err(SimError::DegenerateSilhouette);
    }
    Ok(sil)
}

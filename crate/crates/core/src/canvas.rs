//! The square cell complex, pictures on it, edge weights and the order
//! function `|A| = Σ_{e∈∂A} (N − δ(e))`.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::pixelset::PixelSet;

/// Widest canvas the bitmask representation supports.
pub const HARD_PIXEL_CAP: usize = 32;
/// Default cap for exact mode, where all of `2^Π` is enumerated.
pub const DEFAULT_PIXEL_CAP: usize = 20;

/// An edge (1-cell) joining two distinct pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    #[inline]
    pub fn crosses(self, set: PixelSet) -> bool {
        set.contains(self.a) != set.contains(self.b)
    }
}

/// Pixels and the edges joining them.
///
/// Grid canvases are row-major; induced sub-canvases keep the grid
/// coordinates of their pixels so renders still line up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canvas {
    width: usize,
    height: usize,
    coords: Vec<(usize, usize)>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl Canvas {
    /// Grid canvas checked against [`DEFAULT_PIXEL_CAP`].
    pub fn grid(width: usize, height: usize) -> Result<Self> {
        Self::grid_with_cap(width, height, DEFAULT_PIXEL_CAP)
    }

    /// Grid canvas with orthogonal neighbour edges and no wraparound.
    pub fn grid_with_cap(width: usize, height: usize, cap: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyCanvas { width, height });
        }
        let cap = cap.min(HARD_PIXEL_CAP);
        let pixels = width * height;
        if pixels > cap {
            return Err(Error::PixelCap { pixels, cap });
        }
        let coords = (0..height)
            .flat_map(|r| (0..width).map(move |c| (r, c)))
            .collect();
        let mut edges = Vec::with_capacity(2 * pixels);
        for r in 0..height {
            for c in 0..width {
                let p = r * width + c;
                if c + 1 < width {
                    edges.push(Edge { a: p, b: p + 1 });
                }
                if r + 1 < height {
                    edges.push(Edge { a: p, b: p + width });
                }
            }
        }
        Ok(Self::from_parts(width, height, coords, edges))
    }

    fn from_parts(
        width: usize,
        height: usize,
        coords: Vec<(usize, usize)>,
        edges: Vec<Edge>,
    ) -> Self {
        let mut incident = vec![Vec::new(); coords.len()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.a].push(i);
            incident[e.b].push(i);
        }
        Canvas {
            width,
            height,
            coords,
            edges,
            incident,
        }
    }

    /// The sub-canvas on the pixels of `subset` with the edges inside it.
    /// Returns the canvas and, per new pixel id, the original pixel id.
    pub fn induced(&self, subset: PixelSet) -> Result<(Canvas, Vec<usize>)> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !subset.is_subset(self.all()) {
            return Err(Error::OutOfUniverse {
                set: subset.bits(),
                pixels: self.pixel_count(),
            });
        }
        let old: Vec<usize> = subset.iter().collect();
        let mut new_id = vec![usize::MAX; self.pixel_count()];
        for (i, &p) in old.iter().enumerate() {
            new_id[p] = i;
        }
        let coords = old.iter().map(|&p| self.coords[p]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| subset.contains(e.a) && subset.contains(e.b))
            .map(|e| Edge {
                a: new_id[e.a],
                b: new_id[e.b],
            })
            .collect();
        Ok((
            Self::from_parts(self.width, self.height, coords, edges),
            old,
        ))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.coords.len()
    }

    /// `(row, column)` of a pixel.
    pub fn coords(&self, pixel: usize) -> (usize, usize) {
        self.coords[pixel]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incident_edges(&self, pixel: usize) -> &[usize] {
        &self.incident[pixel]
    }

    /// The whole pixel set Π.
    pub fn all(&self) -> PixelSet {
        PixelSet::full(self.pixel_count())
    }

    /// Edges with exactly one endpoint in `set`, in edge-id order.
    pub fn boundary(&self, set: PixelSet) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].crosses(set))
            .collect()
    }

    /// Whether `set` induces a connected subgraph (the empty set does not).
    pub fn is_connected(&self, set: PixelSet) -> bool {
        let Some(start) = set.first() else {
            return false;
        };
        let mut seen = PixelSet::singleton(start);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for &ei in &self.incident[p] {
                let e = self.edges[ei];
                let q = if e.a == p { e.b } else { e.a };
                if set.contains(q) && !seen.contains(q) {
                    seen = seen.union(PixelSet::singleton(q));
                    stack.push(q);
                }
            }
        }
        seen == set
    }
}

/// A map `π: Π → 2^n`, each pixel carrying an `n`-bit parameter vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Picture {
    canvas: Canvas,
    n: usize,
    values: Vec<u64>,
}

impl Picture {
    /// Attach packed `n`-bit codes (bit `i` is parameter `i`).
    pub fn new(canvas: Canvas, n: usize, values: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::ParameterCount(n));
        }
        if values.len() != canvas.pixel_count() {
            return Err(Error::ValueCount {
                expected: canvas.pixel_count(),
                actual: values.len(),
            });
        }
        if n < 64 {
            if let Some((pixel, &value)) = values.iter().enumerate().find(|(_, &v)| v >> n != 0) {
                return Err(Error::ValueWidth {
                    pixel,
                    value,
                    bits: n,
                });
            }
        }
        Ok(Picture { canvas, n, values })
    }

    /// Attach explicit bitvectors, which must all have the same length.
    pub fn from_bits(canvas: Canvas, values: &[Vec<bool>]) -> Result<Self> {
        if values.len() != canvas.pixel_count() {
            return Err(Error::ValueCount {
                expected: canvas.pixel_count(),
                actual: values.len(),
            });
        }
        let n = values.first().map_or(0, Vec::len);
        for (pixel, v) in values.iter().enumerate() {
            if v.len() != n {
                return Err(Error::RaggedValues {
                    pixel,
                    expected: n,
                    actual: v.len(),
                });
            }
        }
        let packed = values
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
            })
            .collect();
        Self::new(canvas, n, packed)
    }

    pub fn canvas(&self) -> &Canvas {
        &self.canvas
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, pixel: usize) -> u64 {
        self.values[pixel]
    }

    /// `δ(e)`: Hamming distance between the endpoint codes.
    pub fn edge_weight(&self, edge: usize) -> Result<u32> {
        let e = self
            .canvas
            .edges
            .get(edge)
            .ok_or(Error::UnknownEdge(edge))?;
        Ok((self.values[e.a] ^ self.values[e.b]).count_ones())
    }

    /// The smallest offset keeping every edge term `N − δ(e)` nonnegative.
    pub fn suggest_n(&self) -> u32 {
        (0..self.canvas.edges.len())
            .map(|i| self.edge_weight(i).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// The picture restricted to the induced sub-canvas on `subset`.
    pub fn restrict(&self, subset: PixelSet) -> Result<Picture> {
        let (canvas, old) = self.canvas.induced(subset)?;
        let values = old.iter().map(|&p| self.values[p]).collect();
        Picture::new(canvas, self.n, values)
    }
}

static NEXT_UNIVERSE: AtomicU64 = AtomicU64::new(1);

/// A picture with its edge weighting and the offset `N`; owns the order
/// function.
#[derive(Clone, Debug)]
pub struct WeightedCanvas {
    picture: Picture,
    delta: Vec<u32>,
    offset: u32,
    id: u64,
}

impl PartialEq for WeightedCanvas {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl WeightedCanvas {
    /// Weight `picture` with offset `N`, which must be at least `max δ`.
    pub fn new(picture: Picture, offset: u32) -> Result<Self> {
        let delta: Vec<u32> = (0..picture.canvas.edges.len())
            .map(|i| picture.edge_weight(i))
            .collect::<Result<_>>()?;
        let max_weight = delta.iter().copied().max().unwrap_or(0);
        if offset < max_weight {
            return Err(Error::OffsetTooSmall { offset, max_weight });
        }
        Ok(WeightedCanvas {
            picture,
            delta,
            offset,
            id: NEXT_UNIVERSE.fetch_add(1, Ordering::Relaxed),
        })
    }

    /// Weight with the suggested offset `N = max δ`.
    pub fn with_suggested_offset(picture: Picture) -> Self {
        let n = picture.suggest_n();
        Self::new(picture, n).expect("suggested offset is admissible")
    }

    pub fn picture(&self) -> &Picture {
        &self.picture
    }

    pub fn canvas(&self) -> &Canvas {
        &self.picture.canvas
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn delta(&self) -> &[u32] {
        &self.delta
    }

    /// Identity of the separation universe `2^Π` this canvas defines.
    pub fn universe_id(&self) -> u64 {
        self.id
    }

    pub fn pixel_count(&self) -> usize {
        self.picture.canvas.pixel_count()
    }

    pub fn all(&self) -> PixelSet {
        self.picture.canvas.all()
    }

    /// Per-edge contribution `N − δ(e)` to the order of a separation.
    pub fn edge_cost(&self, edge: usize) -> u32 {
        self.offset - self.delta[edge]
    }

    /// `|A| = Σ_{e∈∂A} (N − δ(e))`.
    pub fn order(&self, set: PixelSet) -> u64 {
        self.canvas()
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.crosses(set))
            .map(|(i, _)| u64::from(self.edge_cost(i)))
            .sum()
    }

    /// Upper bound on every order value: cutting all edges.
    pub fn order_bound(&self) -> u64 {
        (0..self.delta.len())
            .map(|i| u64::from(self.edge_cost(i)))
            .sum()
    }

    /// The weighted canvas induced on `subset`, keeping this canvas's `N`.
    pub fn restrict(&self, subset: PixelSet) -> Result<WeightedCanvas> {
        WeightedCanvas::new(self.picture.restrict(subset)?, self.offset)
    }
}

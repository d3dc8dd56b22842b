//! Point-line incidence geometries on a finite point set.
//!
//! Points are indices `0..num_points`; a line is a sorted list of at least
//! two distinct points. The structure must be a partial linear space: two
//! distinct points lie on at most one common line. Lines are stored sorted
//! lexicographically, so equal geometries have byte-equal dumps.
//!
//! Two predicates drive the code analysis downstream. A subset is a
//! geometric hyperplane when every line either lies inside it or meets it
//! in exactly one point. For a hyperplane, maximality as a proper subspace
//! is equivalent to connectedness of the collinearity graph induced on its
//! complement, so the pair of answers reported by [`Geometry::hyperplane_report`]
//! is what a maximality check consumes.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("line {0} has fewer than two distinct points")]
    ShortLine(usize),
    #[error("point {point} is out of range for {num_points} points")]
    PointOutOfRange { point: u32, num_points: usize },
    #[error("points {a} and {b} lie on two distinct lines")]
    RepeatedPair { a: u32, b: u32 },
    #[error("subset mask has length {got}, geometry has {want} points")]
    MaskLength { got: usize, want: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Joint answer of the two hyperplane checks for one subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperplaneReport {
    pub is_hyperplane: bool,
    pub complement_connected: bool,
}

/// A finite partial linear space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    num_points: usize,
    lines: Vec<Vec<u32>>,
    /// Collinearity bitmask, `words_per_row` u64 words per point.
    adjacency: Vec<u64>,
    words_per_row: usize,
}

impl Geometry {
    /// Validates and canonicalizes an incidence structure.
    ///
    /// Lines are sorted internally and then lexicographically as a list;
    /// duplicate lines collapse. Fails when a line is short, a point is out
    /// of range, or two points share more than one line.
    pub fn new(num_points: usize, lines: Vec<Vec<u32>>) -> Result<Geometry, GeometryError> {
        let mut canonical: Vec<Vec<u32>> = Vec::with_capacity(lines.len());
        for (i, mut line) in lines.into_iter().enumerate() {
            line.sort_unstable();
            line.dedup();
            if line.len() < 2 {
                return Err(GeometryError::ShortLine(i));
            }
            for &p in &line {
                if p as usize >= num_points {
                    return Err(GeometryError::PointOutOfRange { point: p, num_points });
                }
            }
            canonical.push(line);
        }
        canonical.sort_unstable();
        canonical.dedup();

        let words_per_row = num_points.div_ceil(64);
        let mut adjacency = vec![0u64; num_points * words_per_row];
        let mut set = |a: u32, b: u32| {
            let row = a as usize * words_per_row;
            adjacency[row + (b as usize >> 6)] |= 1u64 << (b & 63);
        };
        let mut seen = std::collections::HashMap::new();
        for (li, line) in canonical.iter().enumerate() {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    if let Some(_prev) = seen.insert((a, b), li) {
                        return Err(GeometryError::RepeatedPair { a, b });
                    }
                    set(a, b);
                    set(b, a);
                }
            }
        }
        Ok(Geometry { num_points, lines: canonical, adjacency, words_per_row })
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    /// Number of points collinear with `p`, not counting `p` itself.
    pub fn degree(&self, p: u32) -> usize {
        let row = p as usize * self.words_per_row;
        self.adjacency[row..row + self.words_per_row]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn are_collinear(&self, a: u32, b: u32) -> bool {
        let row = a as usize * self.words_per_row;
        self.adjacency[row + (b as usize >> 6)] >> (b & 63) & 1 == 1
    }

    /// The distinct line sizes, ascending.
    pub fn line_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.lines.iter().map(|l| l.len()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }

    fn check_mask(&self, mask: &[bool]) -> Result<(), GeometryError> {
        if mask.len() != self.num_points {
            return Err(GeometryError::MaskLength { got: mask.len(), want: self.num_points });
        }
        Ok(())
    }

    /// True when every line either lies inside the subset or meets it in
    /// exactly one point. The full point set qualifies trivially.
    pub fn is_geometric_hyperplane(&self, member: &[bool]) -> Result<bool, GeometryError> {
        self.check_mask(member)?;
        for line in &self.lines {
            let inside = line.iter().filter(|&&p| member[p as usize]).count();
            if inside != 1 && inside != line.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Connected components of the collinearity graph induced on the points
    /// with `keep` set, each sorted, ordered by smallest member.
    pub fn components(&self, keep: &[bool]) -> Result<Vec<Vec<u32>>, GeometryError> {
        self.check_mask(keep)?;
        let mut seen = vec![false; self.num_points];
        let mut out = Vec::new();
        for start in 0..self.num_points {
            if !keep[start] || seen[start] {
                continue;
            }
            let mut component = Vec::new();
            let mut stack = vec![start as u32];
            seen[start] = true;
            while let Some(p) = stack.pop() {
                component.push(p);
                let row = p as usize * self.words_per_row;
                for w in 0..self.words_per_row {
                    let mut word = self.adjacency[row + w];
                    while word != 0 {
                        let b = w * 64 + word.trailing_zeros() as usize;
                        word &= word - 1;
                        if keep[b] && !seen[b] {
                            seen[b] = true;
                            stack.push(b as u32);
                        }
                    }
                }
            }
            component.sort_unstable();
            out.push(component);
        }
        Ok(out)
    }

    /// True when the complement of the subset induces a connected graph.
    /// An empty complement counts as connected.
    pub fn complement_connected(&self, member: &[bool]) -> Result<bool, GeometryError> {
        self.check_mask(member)?;
        let keep: Vec<bool> = member.iter().map(|&m| !m).collect();
        Ok(self.components(&keep)?.len() <= 1)
    }

    /// Runs both hyperplane checks on one subset.
    pub fn hyperplane_report(&self, member: &[bool]) -> Result<HyperplaneReport, GeometryError> {
        Ok(HyperplaneReport {
            is_hyperplane: self.is_geometric_hyperplane(member)?,
            complement_connected: self.complement_connected(member)?,
        })
    }

    /// Plain text dump: a `points N` header, then one line of the geometry
    /// per text line as space-separated point indices. Lines appear in
    /// their canonical order.
    pub fn dump(&self) -> String {
        let mut out = format!("points {}\n", self.num_points);
        for line in &self.lines {
            let text: Vec<String> = line.iter().map(|p| p.to_string()).collect();
            out.push_str(&text.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the [`Geometry::dump`] format.
    pub fn parse(text: &str) -> Result<Geometry, GeometryError> {
        let mut lines_iter = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines_iter.next().ok_or_else(|| {
            GeometryError::Parse("missing points header".to_string())
        })?;
        let num_points = header
            .strip_prefix("points ")
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| GeometryError::Parse(format!("bad header {header:?}")))?;
        let mut lines = Vec::new();
        for l in lines_iter {
            let pts: Result<Vec<u32>, _> = l.split_whitespace().map(str::parse).collect();
            let pts = pts.map_err(|_| GeometryError::Parse(format!("bad line {l:?}")))?;
            lines.push(pts);
        }
        Geometry::new(num_points, lines)
    }
}

//! Labelings of the Fano plane constrained by the T/Q/C rules.
//!
//! Points are the nonzero vectors `1..=7` of F₂³. The line `L_w` is the set
//! of points `x` with `x · w = 0`, for nonzero `w`. Each point carries a label
//! T or Q, each line a label C or not-C, subject to:
//!
//! * every line through a T point is a C line;
//! * every C line carries exactly two T points and one Q point.

use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FanoDiagram {
    /// Bit `p - 1` set iff point `p` is labeled T.
    pub t_points: u8,
    /// Bit `w - 1` set iff line `L_w` is labeled C.
    pub c_lines: u8,
}

#[inline]
fn dot(x: u8, w: u8) -> bool {
    (x & w).count_ones().is_multiple_of(2)
}

/// The three points of line `L_w`.
pub fn line_points(w: u8) -> [u8; 3] {
    let mut pts = [0u8; 3];
    let mut k = 0;
    for x in 1..=7u8 {
        if dot(x, w) {
            pts[k] = x;
            k += 1;
        }
    }
    pts
}

impl FanoDiagram {
    pub fn is_t(&self, p: u8) -> bool {
        (self.t_points >> (p - 1)) & 1 == 1
    }

    pub fn is_c(&self, w: u8) -> bool {
        (self.c_lines >> (w - 1)) & 1 == 1
    }

    pub fn t_count(&self) -> u32 {
        self.t_points.count_ones()
    }

    pub fn q_count(&self) -> u32 {
        7 - self.t_count()
    }

    pub fn c_count(&self) -> u32 {
        self.c_lines.count_ones()
    }

    pub fn satisfies_rules(&self) -> bool {
        for w in 1..=7u8 {
            let pts = line_points(w);
            let ts = pts.iter().filter(|&&p| self.is_t(p)).count();
            if ts > 0 && !self.is_c(w) {
                return false;
            }
            if self.is_c(w) && ts != 2 {
                return false;
            }
        }
        true
    }

    /// Whether the Q points lie on one line.
    pub fn q_collinear(&self) -> bool {
        let qs: Vec<u8> = (1..=7u8).filter(|&p| !self.is_t(p)).collect();
        (1..=7u8).any(|w| qs.iter().all(|&p| dot(p, w)))
    }

    fn transform(&self, m: &[u8; 3]) -> FanoDiagram {
        let apply = |x: u8| (0..3).fold(0u8, |acc, i| if (x >> i) & 1 == 1 { acc ^ m[i] } else { acc });
        let mut t = 0u8;
        for p in 1..=7u8 {
            if self.is_t(p) {
                t |= 1 << (apply(p) - 1);
            }
        }
        let mut c = 0u8;
        for w in 1..=7u8 {
            if self.is_c(w) {
                let img: Vec<u8> = line_points(w).iter().map(|&p| apply(p)).collect();
                let w2 = (1..=7u8).find(|&v| img.iter().all(|&p| dot(p, v))).expect("collineations map lines to lines");
                c |= 1 << (w2 - 1);
            }
        }
        FanoDiagram { t_points: t, c_lines: c }
    }
}

/// All invertible 3×3 matrices over F₂, as images of the basis vectors.
pub fn collineations() -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in 1..=7u8 {
        for b in 1..=7u8 {
            for c in 1..=7u8 {
                if b != a && c != a && c != b && c != a ^ b {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Every labeling satisfying both rules, exhaustively over `2^7 × 2^7` labelings.
pub fn fano_solve(require_t: bool) -> Vec<FanoDiagram> {
    let mut out = Vec::new();
    for t_points in 0..=127u8 {
        if require_t && t_points == 0 {
            continue;
        }
        for c_lines in 0..=127u8 {
            let d = FanoDiagram { t_points, c_lines };
            if d.satisfies_rules() {
                out.push(d);
            }
        }
    }
    out
}

/// Partition of `solutions` into orbits of the collineation group.
pub fn orbits(solutions: &[FanoDiagram]) -> Vec<Vec<FanoDiagram>> {
    let group = collineations();
    let mut remaining: BTreeSet<FanoDiagram> = solutions.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&first) = remaining.iter().next() {
        let orbit: BTreeSet<FanoDiagram> = group.iter().map(|m| first.transform(m)).collect();
        for d in &orbit {
            remaining.remove(d);
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

/// Text rendering used by the command line: T points, Q points, C lines.
pub fn describe(d: &FanoDiagram) -> String {
    let pts = |want_t: bool| -> Vec<String> {
        (1..=7u8).filter(|&p| d.is_t(p) == want_t).map(|p| format!("{p:03b}")).collect()
    };
    let lines: Vec<String> = (1..=7u8)
        .filter(|&w| d.is_c(w))
        .map(|w| {
            let p = line_points(w);
            format!("{{{:03b},{:03b},{:03b}}}", p[0], p[1], p[2])
        })
        .collect();
    format!("T=[{}] Q=[{}] C=[{}]", pts(true).join(" "), pts(false).join(" "), lines.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_incidence() {
        for w in 1..=7u8 {
            assert_eq!(line_points(w).len(), 3);
        }
        for p in 1..=7u8 {
            assert_eq!((1..=7u8).filter(|&w| line_points(w).contains(&p)).count(), 3);
        }
        assert_eq!(collineations().len(), 168);
    }

    #[test]
    fn seven_solutions_with_a_t_vertex() {
        let sols = fano_solve(true);
        assert_eq!(sols.len(), 7);
        for d in &sols {
            assert_eq!((d.t_count(), d.q_count(), d.c_count()), (4, 3, 6));
            assert!(d.q_collinear());
        }
        assert_eq!(orbits(&sols).len(), 1);
    }

    #[test]
    fn without_t_requirement_adds_the_empty_labeling() {
        let sols = fano_solve(false);
        assert_eq!(sols.len(), 8);
        assert!(sols.contains(&FanoDiagram { t_points: 0, c_lines: 0 }));
    }

    #[test]
    fn description_lists_labels() {
        let d = fano_solve(true)[0];
        let s = describe(&d);
        assert!(s.matches(' ').count() >= 2);
        assert!(s.starts_with("T=["));
    }
}

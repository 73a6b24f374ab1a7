//! Mixed-radix point encoding shared by the dense tables.
//!
//! A point `(p1, ..., pn)` over an alphabet of size `a` has code
//! `p1 + p2*a + ... + pn*a^(n-1)`: the first coordinate is the least
//! significant digit. Over `{0,1}` the code of `e_I` is the bitmask of `I`.

/// Code of a point, little-endian in the coordinates.
pub fn encode(point: &[usize], radix: usize) -> usize {
    point.iter().rev().fold(0, |acc, &d| acc * radix + d)
}

pub fn decode(mut code: usize, arity: usize, radix: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(arity);
    for _ in 0..arity {
        out.push(code % radix);
        code /= radix;
    }
    out
}

/// `radix^arity`, or `None` on overflow.
pub fn count(arity: usize, radix: usize) -> Option<usize> {
    radix.checked_pow(u32::try_from(arity).ok()?)
}

/// All points of `radix^arity` in code order.
#[derive(Debug, Clone)]
pub struct Points {
    current: Vec<usize>,
    radix: usize,
    done: bool,
}

impl Points {
    pub fn new(arity: usize, radix: usize) -> Self {
        Points {
            current: vec![0; arity],
            radix,
            done: radix == 0,
        }
    }
}

impl Iterator for Points {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = true;
        for d in self.current.iter_mut() {
            *d += 1;
            if *d < self.radix {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

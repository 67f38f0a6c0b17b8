//! Raw compute kernels behind the graph ops. All buffers are row-major.

use super::tensor::Real;

/// c[m,n] = a[m,k] @ b[k,n] (+ c if accumulate)
pub fn gemm<R: Real>(
    m: usize,
    k: usize,
    n: usize,
    a: &[R],
    b: &[R],
    c: &mut [R],
    accumulate: bool,
) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    if m == 0 || k == 0 || n == 0 {
        return;
    }
    let beta = if accumulate { R::ONE } else { R::ZERO };
    unsafe {
        R::gemm(
            m,
            k,
            n,
            R::ONE,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// c[m,n] = a[m,k] @ b[n,k]^T
pub fn gemm_bt<R: Real>(
    m: usize,
    k: usize,
    n: usize,
    a: &[R],
    b: &[R],
    c: &mut [R],
    accumulate: bool,
) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), n * k);
    debug_assert_eq!(c.len(), m * n);
    if m == 0 || k == 0 || n == 0 {
        return;
    }
    let beta = if accumulate { R::ONE } else { R::ZERO };
    unsafe {
        R::gemm(
            m,
            k,
            n,
            R::ONE,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            1,
            k as isize,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// c[m,n] = a[k,m]^T @ b[k,n]
pub fn gemm_at<R: Real>(
    m: usize,
    k: usize,
    n: usize,
    a: &[R],
    b: &[R],
    c: &mut [R],
    accumulate: bool,
) {
    debug_assert_eq!(a.len(), k * m);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    if m == 0 || k == 0 || n == 0 {
        return;
    }
    let beta = if accumulate { R::ONE } else { R::ZERO };
    unsafe {
        R::gemm(
            m,
            k,
            n,
            R::ONE,
            a.as_ptr(),
            1,
            m as isize,
            b.as_ptr(),
            n as isize,
            1,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// Unfold one [C,H,W] image into [C*kh*kw, oh*ow] patch columns.
pub fn im2col<R: Real>(
    x: &[R],
    c_in: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
    stride: usize,
    pad: usize,
    cols: &mut [R],
) {
    let oh = (h + 2 * pad - kh) / stride + 1;
    let ow = (w + 2 * pad - kw) / stride + 1;
    debug_assert_eq!(cols.len(), c_in * kh * kw * oh * ow);
    let mut row = 0usize;
    for c in 0..c_in {
        let xc = &x[c * h * w..(c + 1) * h * w];
        for ky in 0..kh {
            for kx in 0..kw {
                let dst = &mut cols[row * oh * ow..(row + 1) * oh * ow];
                let mut i = 0usize;
                for oy in 0..oh {
                    let sy = (oy * stride + ky) as isize - pad as isize;
                    if sy < 0 || sy >= h as isize {
                        for _ in 0..ow {
                            dst[i] = R::ZERO;
                            i += 1;
                        }
                        continue;
                    }
                    let base = sy as usize * w;
                    for ox in 0..ow {
                        let sx = (ox * stride + kx) as isize - pad as isize;
                        dst[i] = if sx < 0 || sx >= w as isize {
                            R::ZERO
                        } else {
                            xc[base + sx as usize]
                        };
                        i += 1;
                    }
                }
                row += 1;
            }
        }
    }
}

/// Scatter-add of patch-column gradients back onto the [C,H,W] input.
#[allow(clippy::too_many_arguments)]
pub fn col2im_add<R: Real>(
    cols: &[R],
    c_in: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
    stride: usize,
    pad: usize,
    gx: &mut [R],
) {
    let oh = (h + 2 * pad - kh) / stride + 1;
    let ow = (w + 2 * pad - kw) / stride + 1;
    let mut row = 0usize;
    for c in 0..c_in {
        let base_c = c * h * w;
        for ky in 0..kh {
            for kx in 0..kw {
                let src = &cols[row * oh * ow..(row + 1) * oh * ow];
                let mut i = 0usize;
                for oy in 0..oh {
                    let sy = (oy * stride + ky) as isize - pad as isize;
                    if sy < 0 || sy >= h as isize {
                        i += ow;
                        continue;
                    }
                    let base = base_c + sy as usize * w;
                    for ox in 0..ow {
                        let sx = (ox * stride + kx) as isize - pad as isize;
                        if sx >= 0 && sx < w as isize {
                            let v = gx[base + sx as usize].to_f64() + src[i].to_f64();
                            gx[base + sx as usize] = R::from_f64(v);
                        }
                        i += 1;
                    }
                }
                row += 1;
            }
        }
    }
}

/// 2x2 stride-2 average pool of one [C,H,W] image.
pub fn avg_pool2<R: Real>(x: &[R], c: usize, h: usize, w: usize, out: &mut [R]) {
    let oh = h / 2;
    let ow = w / 2;
    debug_assert_eq!(out.len(), c * oh * ow);
    for ch in 0..c {
        let xc = &x[ch * h * w..(ch + 1) * h * w];
        let oc = &mut out[ch * oh * ow..(ch + 1) * oh * ow];
        for oy in 0..oh {
            for ox in 0..ow {
                let i0 = 2 * oy * w + 2 * ox;
                let s = xc[i0].to_f64()
                    + xc[i0 + 1].to_f64()
                    + xc[i0 + w].to_f64()
                    + xc[i0 + w + 1].to_f64();
                oc[oy * ow + ox] = R::from_f64(s * 0.25);
            }
        }
    }
}

/// Nearest-neighbor 2x upsample of one [C,H,W] image.
pub fn upsample2<R: Real>(x: &[R], c: usize, h: usize, w: usize, out: &mut [R]) {
    let oh = h * 2;
    let ow = w * 2;
    debug_assert_eq!(out.len(), c * oh * ow);
    for ch in 0..c {
        let xc = &x[ch * h * w..(ch + 1) * h * w];
        let oc = &mut out[ch * oh * ow..(ch + 1) * oh * ow];
        for y in 0..oh {
            let sy = y / 2;
            for x2 in 0..ow {
                oc[y * ow + x2] = xc[sy * w + x2 / 2];
            }
        }
    }
}

/// Softmax over the last axis of rows of length `n`, in place.
pub fn softmax_rows<R: Real>(data: &mut [R], n: usize) {
    debug_assert_eq!(data.len() % n, 0);
    for row in data.chunks_mut(n) {
        let mut m = f64::NEG_INFINITY;
        for v in row.iter() {
            m = m.max(v.to_f64());
        }
        let mut sum = 0.0;
        for v in row.iter_mut() {
            let e = (v.to_f64() - m).exp();
            sum += e;
            *v = R::from_f64(e);
        }
        let inv = 1.0 / sum;
        for v in row.iter_mut() {
            *v = R::from_f64(v.to_f64() * inv);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gemm_small_matches_hand_result() {
        // [[1,2],[3,4]] @ [[5,6],[7,8]] = [[19,22],[43,50]]
        let a = [1.0f64, 2.0, 3.0, 4.0];
        let b = [5.0f64, 6.0, 7.0, 8.0];
        let mut c = [0.0f64; 4];
        gemm(2, 2, 2, &a, &b, &mut c, false);
        assert_eq!(c, [19.0, 22.0, 43.0, 50.0]);
    }

    #[test]
    fn gemm_transposed_variants_agree() {
        let a = [1.0f64, 2.0, 3.0, 4.0, 5.0, 6.0]; // 2x3
        let b = [1.0f64, 0.5, -1.0, 2.0, 0.0, 3.0]; // 3x2
        let mut c = [0.0f64; 4];
        gemm(2, 3, 2, &a, &b, &mut c, false);

        // b_t is 2x3 so that b_t^T == b
        let b_t = [1.0f64, -1.0, 0.0, 0.5, 2.0, 3.0];
        let mut c2 = [0.0f64; 4];
        gemm_bt(2, 3, 2, &a, &b_t, &mut c2, false);
        assert_eq!(c, c2);

        // a_t is 3x2 so that a_t^T == a
        let a_t = [1.0f64, 4.0, 2.0, 5.0, 3.0, 6.0];
        let mut c3 = [0.0f64; 4];
        gemm_at(2, 3, 2, &a_t, &b, &mut c3, false);
        assert_eq!(c, c3);
    }

    #[test]
    fn im2col_identity_kernel() {
        // 1x1 kernel, stride 1, no pad: columns are the image itself.
        let x = [1.0f32, 2.0, 3.0, 4.0];
        let mut cols = [0.0f32; 4];
        im2col(&x, 1, 2, 2, 1, 1, 1, 0, &mut cols);
        assert_eq!(cols, x);
    }

    #[test]
    fn avg_pool2_of_known_block() {
        let x = [1.0f32, 3.0, 5.0, 7.0];
        let mut out = [0.0f32; 1];
        avg_pool2(&x, 1, 2, 2, &mut out);
        assert_eq!(out[0], 4.0);
    }

    #[test]
    fn softmax_uniform_rows() {
        let mut d = [0.3f64; 4];
        softmax_rows(&mut d, 4);
        for v in d {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }
}

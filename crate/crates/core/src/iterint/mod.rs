//! Iterated-integral words, their conversion to multiple polylogarithms,
//! H_{−1,0,0,1}, and a quadrature oracle for the integral representations.

mod quadrature;
mod word;

pub use quadrature::{
    h_m1001_quadrature, nielsen_quadrature, quadrature, quadrature_with, GaussLegendre, Integrand,
    NielsenKernel, QuadratureOptions, QuadratureResult,
};
pub use word::{
    eval_word, eval_word_counted, h_m1001, h_m1001_counted, mpl_from_word, word_from_mpl, IteratedWord,
    Letter,
};

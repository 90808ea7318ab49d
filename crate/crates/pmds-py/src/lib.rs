//! Python extension module exposing the SD/PMDS erasure-code types.
//!
//! Symbols cross the boundary as Python ints where bit `k` is the
//! coefficient of `x^k`, matching the library's byte serialization.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pmds::{
    build_parity_check, find_sd_pmds_separator, pattern_count, verify, Algebra, CodeParams,
    CodeVariant, ErasurePattern, Property, StripeCodec, Symbol, VerifyError, VerifyMode,
    VerifyOptions,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn symbol_to_int(s: &Symbol) -> BigUint {
    BigUint::from_bytes_le(&s.to_bytes())
}

fn int_to_symbol(alg: &Algebra, v: &BigUint) -> PyResult<Symbol> {
    let mut bytes = v.to_bytes_le();
    let want = alg.symbol_byte_len();
    if bytes.len() > want {
        return Err(value_err(format!(
            "value does not fit in {} bits",
            alg.width()
        )));
    }
    bytes.resize(want, 0);
    alg.symbol_from_bytes(&bytes).map_err(value_err)
}

fn parse_property(name: &str) -> PyResult<Property> {
    match name {
        "sd" => Ok(Property::Sd),
        "pmds" => Ok(Property::Pmds),
        _ => Err(value_err(format!(
            "unknown property {name:?}; expected 'sd' or 'pmds'"
        ))),
    }
}

/// A symbol algebra: GF(2^b) or the ring of binary polynomials mod M_p(x).
#[pyclass(name = "Algebra", frozen)]
struct PyAlgebra {
    inner: Algebra,
}

#[pymethods]
impl PyAlgebra {
    /// GF(2^b); the modulus defaults to the conventional polynomial for
    /// b in {4, 8, 12, 16} and must be given explicitly otherwise.
    #[staticmethod]
    #[pyo3(signature = (b, modulus=None))]
    fn field(b: u32, modulus: Option<u32>) -> PyResult<Self> {
        let inner = match modulus {
            Some(f) => Algebra::field(b, f),
            None => Algebra::field_default(b),
        }
        .map_err(value_err)?;
        Ok(PyAlgebra { inner })
    }

    /// The ring of binary polynomials modulo M_p(x) for a prime p.
    #[staticmethod]
    fn ring(p: u32) -> PyResult<Self> {
        Ok(PyAlgebra {
            inner: Algebra::ring(p).map_err(value_err)?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind() {
            pmds::AlgebraKind::Field => "field",
            pmds::AlgebraKind::Ring => "ring",
        }
    }

    /// Multiplicative order of the generator alpha.
    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    /// Symbol bit length: b for fields, p-1 for rings.
    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    fn add(&self, a: BigUint, b: BigUint) -> PyResult<BigUint> {
        let a = int_to_symbol(&self.inner, &a)?;
        let b = int_to_symbol(&self.inner, &b)?;
        Ok(symbol_to_int(&a.add(&b)))
    }

    fn mul(&self, a: BigUint, b: BigUint) -> PyResult<BigUint> {
        let a = int_to_symbol(&self.inner, &a)?;
        let b = int_to_symbol(&self.inner, &b)?;
        Ok(symbol_to_int(&a.mul(&b)))
    }

    fn inv(&self, a: BigUint) -> PyResult<BigUint> {
        let a = int_to_symbol(&self.inner, &a)?;
        Ok(symbol_to_int(&a.inv().map_err(value_err)?))
    }

    fn is_unit(&self, a: BigUint) -> PyResult<bool> {
        Ok(int_to_symbol(&self.inner, &a)?.is_unit())
    }

    /// alpha^k, with k reduced modulo the generator order (negative ok).
    fn alpha_pow(&self, k: i64) -> BigUint {
        symbol_to_int(&self.inner.alpha_pow_i(k))
    }

    fn __repr__(&self) -> String {
        match self.inner.kind() {
            pmds::AlgebraKind::Field => format!(
                "Algebra.field({}, 0x{:x})",
                self.inner.width(),
                self.inner.field_modulus().unwrap()
            ),
            pmds::AlgebraKind::Ring => {
                format!("Algebra.ring({})", self.inner.ring_prime().unwrap())
            }
        }
    }
}

/// Outcome of an exhaustive property verification.
#[pyclass(name = "VerifyReport", frozen)]
struct PyVerifyReport {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    patterns_checked: u64,
    #[pyo3(get)]
    failures: Vec<Vec<(usize, usize)>>,
    #[pyo3(get)]
    elapsed_ms: f64,
}

#[pymethods]
impl PyVerifyReport {
    fn __repr__(&self) -> String {
        format!(
            "VerifyReport(passed={}, patterns_checked={}, failures={})",
            self.passed,
            self.patterns_checked,
            self.failures.len()
        )
    }
}

/// One SD or PMDS code instance over an m x n stripe.
#[pyclass(name = "Code", frozen)]
struct PyCode {
    params: CodeParams,
    codec: StripeCodec,
}

impl PyCode {
    fn grid_to_symbols(
        &self,
        cells: &[Vec<BigUint>],
        skip: &ErasurePattern,
    ) -> PyResult<Vec<Symbol>> {
        let (m, n) = (self.params.m(), self.params.n());
        if cells.len() != m || cells.iter().any(|row| row.len() != n) {
            return Err(value_err(format!("expected an {m}x{n} grid of ints")));
        }
        let alg = self.params.algebra();
        let mut out = Vec::with_capacity(m * n);
        for (r, row) in cells.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if skip.contains(r, c) {
                    out.push(alg.zero()); // erased content is ignored
                } else {
                    out.push(int_to_symbol(&alg, v)?);
                }
            }
        }
        Ok(out)
    }

    fn stripe_to_grid(&self, arr: &pmds::StripeArray) -> Vec<Vec<BigUint>> {
        (0..self.params.m())
            .map(|r| {
                (0..self.params.n())
                    .map(|c| symbol_to_int(arr.cell(r, c)))
                    .collect()
            })
            .collect()
    }
}

#[pymethods]
impl PyCode {
    #[new]
    fn new(m: usize, n: usize, variant: &str, algebra: &PyAlgebra) -> PyResult<Self> {
        let variant = match variant {
            "sd" => CodeVariant::Sd,
            "pmds" => CodeVariant::Pmds,
            _ => {
                return Err(value_err(format!(
                    "unknown variant {variant:?}; expected 'sd' or 'pmds'"
                )))
            }
        };
        let params = CodeParams::new(m, n, variant, algebra.inner).map_err(value_err)?;
        Ok(PyCode {
            params,
            codec: StripeCodec::new(params),
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.params.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.params.n()
    }

    #[getter]
    fn variant(&self) -> String {
        self.params.variant().to_string()
    }

    #[getter]
    fn algebra(&self) -> PyAlgebra {
        PyAlgebra {
            inner: self.params.algebra(),
        }
    }

    /// Data symbols per stripe: m(n-1) - 2.
    #[getter]
    fn data_len(&self) -> usize {
        self.codec.data_len()
    }

    /// The (m+2) x mn parity-check matrix as symbol values.
    fn parity_check(&self) -> Vec<Vec<BigUint>> {
        let h = build_parity_check(&self.params);
        let mat = h.matrix();
        (0..mat.rows())
            .map(|r| {
                (0..mat.cols())
                    .map(|c| symbol_to_int(mat.at(r, c)))
                    .collect()
            })
            .collect()
    }

    /// The exponent tables (g1, g2) behind the two global parity rows,
    /// each an m x n list of ints.
    fn global_exponents(&self) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let h = build_parity_check(&self.params);
        let collect = |which: usize| {
            (0..self.params.m())
                .map(|i| {
                    (0..self.params.n())
                        .map(|j| {
                            if which == 0 {
                                h.g1(i, j).value()
                            } else {
                                h.g2(i, j).value()
                            }
                        })
                        .collect()
                })
                .collect()
        };
        (collect(0), collect(1))
    }

    /// The designated parity cells of the systematic layout.
    fn parity_positions(&self) -> PyResult<Vec<(usize, usize)>> {
        Ok(pmds::parity_positions(&self.params)
            .map_err(value_err)?
            .cells()
            .collect())
    }

    /// Encode data symbols (length data_len) into an m x n stripe.
    fn encode(&self, data: Vec<BigUint>) -> PyResult<Vec<Vec<BigUint>>> {
        let alg = self.params.algebra();
        let symbols: Vec<Symbol> = data
            .iter()
            .map(|v| int_to_symbol(&alg, v))
            .collect::<PyResult<_>>()?;
        let stripe = self.codec.encode(&symbols).map_err(value_err)?;
        Ok(self.stripe_to_grid(&stripe))
    }

    /// Recover the cells listed in `erased` (their given content is
    /// ignored). Raises RuntimeError when the pattern is uncorrectable.
    fn decode(
        &self,
        cells: Vec<Vec<BigUint>>,
        erased: Vec<(usize, usize)>,
    ) -> PyResult<Vec<Vec<BigUint>>> {
        let pattern =
            ErasurePattern::new(erased, self.params.m(), self.params.n()).map_err(value_err)?;
        let symbols = self.grid_to_symbols(&cells, &pattern)?;
        let mut arr = pmds::StripeArray::from_cells(self.params, symbols).map_err(value_err)?;
        arr.erase(&pattern);
        let decoded = self
            .codec
            .decode(&arr)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(self.stripe_to_grid(&decoded))
    }

    /// Exhaustively verify the SD or PMDS property.
    #[pyo3(signature = (property, mode="rank", budget=10_000_000, jobs=1))]
    fn verify(
        &self,
        property: &str,
        mode: &str,
        budget: u64,
        jobs: usize,
    ) -> PyResult<PyVerifyReport> {
        let property = parse_property(property)?;
        let mode = match mode {
            "rank" => VerifyMode::RankOracle,
            "decode" => VerifyMode::DecoderPath,
            _ => {
                return Err(value_err(format!(
                    "unknown mode {mode:?}; expected 'rank' or 'decode'"
                )))
            }
        };
        let report = verify(
            &self.params,
            property,
            mode,
            &VerifyOptions { budget, jobs },
        )
        .map_err(|e| match e {
            VerifyError::Code(_) | VerifyError::WrongVariant => value_err(e),
            other => PyRuntimeError::new_err(other.to_string()),
        })?;
        Ok(PyVerifyReport {
            passed: report.passed(),
            patterns_checked: report.patterns_checked,
            failures: report
                .failures
                .iter()
                .map(|p| p.cells().collect())
                .collect(),
            elapsed_ms: report.elapsed.as_secs_f64() * 1e3,
        })
    }

    /// Find an erasure pattern the SD construction cannot correct, or None.
    fn find_sd_pmds_separator(&self) -> PyResult<Option<Vec<(usize, usize)>>> {
        match find_sd_pmds_separator(&self.params) {
            Ok(found) => Ok(found.map(|p| p.cells().collect())),
            Err(e) => Err(value_err(e)),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Code(m={}, n={}, variant='{}')",
            self.params.m(),
            self.params.n(),
            self.params.variant()
        )
    }
}

/// Closed-form size of the maximal pattern family checked by verify().
#[pyfunction(name = "pattern_count")]
fn py_pattern_count(property: &str, m: usize, n: usize) -> PyResult<u128> {
    Ok(pattern_count(parse_property(property)?, m, n))
}

/// Self-test: M_p(x) is irreducible iff 2 is primitive mod p.
#[pyfunction]
fn mp_irreducibility_matches_primitivity(p: u32) -> PyResult<bool> {
    Algebra::mp_irreducibility_matches_primitivity(p).map_err(value_err)
}

#[pymodule]
fn pmds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyVerifyReport>()?;
    m.add_function(wrap_pyfunction!(py_pattern_count, m)?)?;
    m.add_function(wrap_pyfunction!(mp_irreducibility_matches_primitivity, m)?)?;
    Ok(())
}

use pyo3::prelude::*;

#[pymodule]
fn weightone_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}

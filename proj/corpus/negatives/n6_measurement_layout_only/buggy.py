qc = QuantumCircuit(2, 2)
qc.h(0)
qc.measure(0, 0)
qc.measure(1, 1)

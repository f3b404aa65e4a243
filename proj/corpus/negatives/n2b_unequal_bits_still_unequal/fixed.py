qc = QuantumCircuit(3, 1)
qc.h(0)

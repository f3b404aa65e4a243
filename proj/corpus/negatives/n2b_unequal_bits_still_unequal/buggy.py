qc = QuantumCircuit(3, 2)
qc.h(0)

qc = QuantumCircuit(2)
helper.h(0)
qc.h(0)

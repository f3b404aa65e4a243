qreg = QuantumRegister(3)
creg = ClassicalRegister(2)
spare = ClassicalRegister(2)
qc = QuantumCircuit(qreg, creg)
qc.h(0)

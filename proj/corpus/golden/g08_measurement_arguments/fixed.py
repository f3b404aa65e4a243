qc = QuantumCircuit(3,3)
qc.x(0)
qc.barrier()
qc.measure([0,1,2],[1,0,2]) 

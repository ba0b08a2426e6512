import numpy as np
from scipy.optimize import minimize_scalar
N=8; w=0.01; pb=0.1
tau=2*np.pi/(N*w)
n=np.arange(N); d=1-pb**2/(2*(1+0.01*n))
def var(t):
    c=np.exp(-1j*n*w*d*t)/np.sqrt(N)
    k=np.arange(N)
    # <k|c> with |k> = N^-1/2 sum_n exp(-2pi i n k/N)|n>
    amp=np.array([np.sum(np.exp(2j*np.pi*n*kk/N)*c)/np.sqrt(N) for kk in k])
    q=np.abs(amp)**2
    T=k*tau; m=np.sum(q*T); return np.sum(q*(T-m)**2)
ts=np.linspace(0.5*tau,10.5*tau,20001); v=np.array([var(t) for t in ts])
for i in range(1,len(ts)-1):
    if v[i]<v[i-1] and v[i]<=v[i+1]:
        r=minimize_scalar(var,bracket=(ts[i-1],ts[i],ts[i+1]),tol=1e-12)
        print(r.x, r.x/tau, r.fun, r.fun/tau**2)

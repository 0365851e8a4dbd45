import { App } from "./app.js";

function boot(): void {
  const loginForm = document.getElementById("login-form") as HTMLFormElement;
  const tokenInput = document.getElementById("token-input") as HTMLInputElement;
  const loginError = document.getElementById("login-error") as HTMLElement;
  const taskMount = document.getElementById("task-mount") as HTMLElement;
  const progressMount = document.getElementById("progress") as HTMLElement;

  const app = new App(taskMount, progressMount);

  loginForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    loginError.textContent = "";
    try {
      await app.login(tokenInput.value);
      loginForm.hidden = true;
    } catch (err) {
      loginError.textContent = err instanceof Error ? err.message : String(err);
    }
  });
}

document.addEventListener("DOMContentLoaded", boot);
